#pragma once

#include "thalparc/labels.hpp"
#include "thalparc/matrix.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thalparc {

enum class FeatureGroup { base, coord, multi_ti, conn6, conn98 };

/// Canonical order; selected groups are always concatenated in this order.
inline constexpr std::array<FeatureGroup, 5> kAllGroups{
    FeatureGroup::base, FeatureGroup::coord, FeatureGroup::multi_ti, FeatureGroup::conn6,
    FeatureGroup::conn98};

std::size_t group_dimension(FeatureGroup g);
/// Lower-case CLI spelling: base, coord, multiti, conn6, conn98.
std::string_view group_key(FeatureGroup g);
/// Table heading: Base, Coord, Multi-TI, Conn6, Conn98.
std::string_view group_heading(FeatureGroup g);
FeatureGroup parse_group(std::string_view key);

/// Column names of a group. Coord columns are derived from (i, j, k) and
/// never appear in a feature table.
std::vector<std::string> group_columns(FeatureGroup g);

/// An ordered selection of feature groups.
class FeatureGroupSpec {
public:
    FeatureGroupSpec() = default;
    /// Duplicates are dropped and the result is put in canonical order.
    explicit FeatureGroupSpec(std::span<const FeatureGroup> groups);
    FeatureGroupSpec(std::initializer_list<FeatureGroup> groups);

    /// "base,coord,multiti"
    static FeatureGroupSpec parse(std::string_view text);
    static FeatureGroupSpec all();

    const std::vector<FeatureGroup>& groups() const noexcept { return groups_; }
    bool contains(FeatureGroup g) const;
    bool empty() const noexcept { return groups_.empty(); }
    std::size_t dimension() const;
    std::vector<std::string> column_names() const;
    /// Only the five Knutsson components are directional.
    std::vector<bool> directional() const;
    std::string to_string() const;

    bool operator==(const FeatureGroupSpec&) const = default;

private:
    std::vector<FeatureGroup> groups_;
};

struct VoxelRecord {
    std::string subject;
    std::array<std::int32_t, 3> ijk{};
    LabelSet labels;
};

/// Immutable per-voxel dataset. Feature values are stored per group, one
/// row per record.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<VoxelRecord> records, std::map<FeatureGroup, Matrix> features);

    std::size_t size() const noexcept { return records_.size(); }
    const std::vector<VoxelRecord>& records() const noexcept { return records_; }
    const VoxelRecord& record(std::size_t i) const { return records_[i]; }

    /// Coord is always available; other groups only if loaded.
    bool has_group(FeatureGroup g) const;
    const Matrix& group(FeatureGroup g) const;
    std::vector<FeatureGroup> loaded_groups() const;

    /// Subject ids in order of first appearance.
    std::vector<std::string> subjects() const;
    std::vector<std::pair<std::string, std::size_t>> subject_counts() const;
    std::vector<std::size_t> rows_of_subjects(std::span<const std::string> subjects) const;

    /// Bounding-box-centred voxel coordinates, N x 3.
    const Matrix& coords() const noexcept { return coords_; }

private:
    std::vector<VoxelRecord> records_;
    std::map<FeatureGroup, Matrix> features_;
    Matrix coords_;
};

/// Reads a tab-separated feature table, keeping the groups in `schema`
/// (Coord needs no columns). Extra columns are ignored.
Dataset read_dataset(std::istream& in, const FeatureGroupSpec& schema,
                     std::string_view source = "<stream>");
Dataset load_dataset(const std::string& path, const FeatureGroupSpec& schema);

/// Writes every loaded group except Coord, canonical column order.
void write_dataset(std::ostream& out, const Dataset& dataset);

/// Concatenated feature matrix for the selected groups, optionally restricted
/// to a row subset.
Matrix select_features(const Dataset& dataset, const FeatureGroupSpec& groups);
Matrix select_features(const Dataset& dataset, const FeatureGroupSpec& groups,
                       std::span<const std::size_t> rows);

/// Offsets from the midpoint of the per-axis min/max; may be half-integers.
std::vector<std::array<double, 3>> recenter_coords(std::span<const std::array<std::int32_t, 3>> ijk);

struct FoldPlan {
    std::size_t n_folds = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::string>> folds;

    /// All subjects not in fold `f`.
    std::vector<std::string> training_subjects(std::size_t f) const;
};

/// Seeded shuffle of the (sorted, de-duplicated) subject ids dealt
/// round-robin into `n_folds` folds.
FoldPlan make_folds(std::span<const std::string> subject_ids, std::size_t n_folds, std::uint64_t seed);

} // namespace thalparc
