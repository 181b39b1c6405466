#include "thalparc/feature_store.hpp"

#include "thalparc/error.hpp"
#include "thalparc/tsv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace thalparc {

namespace {

std::vector<std::string> numbered(std::string_view prefix, std::size_t n, int width) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string idx = std::to_string(i);
        if (static_cast<int>(idx.size()) < width) {
            idx.insert(0, static_cast<std::size_t>(width) - idx.size(), '0');
        }
        out.push_back(std::string(prefix) + idx);
    }
    return out;
}

} // namespace

std::size_t group_dimension(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::base: return 19;
    case FeatureGroup::coord: return 3;
    case FeatureGroup::multi_ti: return 41;
    case FeatureGroup::conn6: return 6;
    case FeatureGroup::conn98: return 98;
    }
    return 0;
}

std::string_view group_key(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::base: return "base";
    case FeatureGroup::coord: return "coord";
    case FeatureGroup::multi_ti: return "multiti";
    case FeatureGroup::conn6: return "conn6";
    case FeatureGroup::conn98: return "conn98";
    }
    return "";
}

std::string_view group_heading(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::base: return "Base";
    case FeatureGroup::coord: return "Coord";
    case FeatureGroup::multi_ti: return "Multi-TI";
    case FeatureGroup::conn6: return "Conn6";
    case FeatureGroup::conn98: return "Conn98";
    }
    return "";
}

FeatureGroup parse_group(std::string_view key) {
    for (FeatureGroup g : kAllGroups) {
        if (group_key(g) == key) {
            return g;
        }
    }
    throw Error(ErrorCode::invalid_argument, "unknown feature group '" + std::string(key) + "'");
}

std::vector<std::string> group_columns(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::base:
        return {"mprage", "t2w",       "fgatir",    "t1map_a",   "t1map_b", "fa",    "md",
                "rd",     "ad",        "tr",        "westin_cl", "westin_cp", "westin_cs", "knut1",
                "knut2",  "knut3",     "knut4",     "knut5",     "knut_edge"};
    case FeatureGroup::coord: return {"coord_i", "coord_j", "coord_k"};
    case FeatureGroup::multi_ti: return numbered("ti_", 41, 3);
    case FeatureGroup::conn6: return numbered("conn6_", 6, 1);
    case FeatureGroup::conn98: return numbered("conn98_", 98, 1);
    }
    return {};
}

FeatureGroupSpec::FeatureGroupSpec(std::span<const FeatureGroup> groups) {
    for (FeatureGroup g : kAllGroups) {
        if (std::find(groups.begin(), groups.end(), g) != groups.end()) {
            groups_.push_back(g);
        }
    }
}

FeatureGroupSpec::FeatureGroupSpec(std::initializer_list<FeatureGroup> groups)
    : FeatureGroupSpec(std::span<const FeatureGroup>(groups.begin(), groups.size())) {}

FeatureGroupSpec FeatureGroupSpec::parse(std::string_view text) {
    std::vector<FeatureGroup> groups;
    for (auto token : tsv::split(text, ',')) {
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (!token.empty()) {
            groups.push_back(parse_group(token));
        }
    }
    if (groups.empty()) {
        throw Error(ErrorCode::invalid_argument, "feature group list is empty");
    }
    return FeatureGroupSpec(groups);
}

FeatureGroupSpec FeatureGroupSpec::all() { return FeatureGroupSpec(kAllGroups); }

bool FeatureGroupSpec::contains(FeatureGroup g) const {
    return std::find(groups_.begin(), groups_.end(), g) != groups_.end();
}

std::size_t FeatureGroupSpec::dimension() const {
    std::size_t d = 0;
    for (FeatureGroup g : groups_) {
        d += group_dimension(g);
    }
    return d;
}

std::vector<std::string> FeatureGroupSpec::column_names() const {
    std::vector<std::string> out;
    for (FeatureGroup g : groups_) {
        auto cols = group_columns(g);
        out.insert(out.end(), cols.begin(), cols.end());
    }
    return out;
}

std::vector<bool> FeatureGroupSpec::directional() const {
    std::vector<bool> out;
    for (FeatureGroup g : groups_) {
        for (const auto& name : group_columns(g)) {
            out.push_back(name.size() == 5 && name.starts_with("knut"));
        }
    }
    return out;
}

std::string FeatureGroupSpec::to_string() const {
    std::string out;
    for (FeatureGroup g : groups_) {
        if (!out.empty()) {
            out += ',';
        }
        out += group_key(g);
    }
    return out;
}

Dataset::Dataset(std::vector<VoxelRecord> records, std::map<FeatureGroup, Matrix> features)
    : records_(std::move(records)), features_(std::move(features)), coords_(records_.size(), 3) {
    features_.erase(FeatureGroup::coord);
    for (const auto& [g, m] : features_) {
        if (m.rows() != records_.size() || m.cols() != group_dimension(g)) {
            throw Error(ErrorCode::invalid_argument,
                        "feature block '" + std::string(group_key(g)) + "' has the wrong shape");
        }
    }

    std::unordered_map<std::string, std::vector<std::size_t>> by_subject;
    for (std::size_t r = 0; r < records_.size(); ++r) {
        by_subject[records_[r].subject].push_back(r);
    }
    for (const auto& [subject, rows] : by_subject) {
        std::vector<std::array<std::int32_t, 3>> ijk;
        ijk.reserve(rows.size());
        for (std::size_t r : rows) {
            ijk.push_back(records_[r].ijk);
        }
        const auto offsets = recenter_coords(ijk);
        for (std::size_t n = 0; n < rows.size(); ++n) {
            for (int a = 0; a < 3; ++a) {
                coords_(rows[n], a) = offsets[n][a];
            }
        }
    }
}

bool Dataset::has_group(FeatureGroup g) const {
    return g == FeatureGroup::coord || features_.contains(g);
}

const Matrix& Dataset::group(FeatureGroup g) const {
    if (g == FeatureGroup::coord) {
        return coords_;
    }
    auto it = features_.find(g);
    if (it == features_.end()) {
        throw Error(ErrorCode::schema,
                    "feature group '" + std::string(group_key(g)) + "' was not loaded");
    }
    return it->second;
}

std::vector<FeatureGroup> Dataset::loaded_groups() const {
    std::vector<FeatureGroup> out;
    for (FeatureGroup g : kAllGroups) {
        if (g != FeatureGroup::coord && features_.contains(g)) {
            out.push_back(g);
        }
    }
    return out;
}

std::vector<std::string> Dataset::subjects() const {
    std::vector<std::string> out;
    std::set<std::string_view> seen;
    for (const auto& r : records_) {
        if (seen.insert(r.subject).second) {
            out.push_back(r.subject);
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::size_t>> Dataset::subject_counts() const {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::unordered_map<std::string_view, std::size_t> pos;
    for (const auto& r : records_) {
        auto [it, inserted] = pos.try_emplace(r.subject, out.size());
        if (inserted) {
            out.emplace_back(r.subject, 0);
        }
        ++out[it->second].second;
    }
    return out;
}

std::vector<std::size_t> Dataset::rows_of_subjects(std::span<const std::string> subjects) const {
    std::set<std::string_view> wanted(subjects.begin(), subjects.end());
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < records_.size(); ++r) {
        if (wanted.contains(records_[r].subject)) {
            rows.push_back(r);
        }
    }
    return rows;
}

Dataset read_dataset(std::istream& in, const FeatureGroupSpec& schema, std::string_view source) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::schema, std::string(source) + ": empty feature table");
    }
    const auto header = tsv::split(tsv::chomp(line));
    std::unordered_map<std::string_view, std::size_t> column_of;
    for (std::size_t c = 0; c < header.size(); ++c) {
        column_of.emplace(header[c], c);
    }
    auto require = [&](const std::string& name) {
        auto it = column_of.find(name);
        if (it == column_of.end()) {
            throw Error(ErrorCode::schema,
                        std::string(source) + ": missing required column '" + name + "'");
        }
        return it->second;
    };

    const std::size_t c_subject = require("subject");
    const std::array<std::size_t, 3> c_ijk{require("i"), require("j"), require("k")};
    const std::size_t c_labels = require("labels");

    struct Block {
        FeatureGroup group;
        std::vector<std::size_t> columns;
        std::vector<double> values;
    };
    std::vector<Block> blocks;
    for (FeatureGroup g : schema.groups()) {
        if (g == FeatureGroup::coord) {
            continue;
        }
        Block b{g, {}, {}};
        for (const auto& name : group_columns(g)) {
            b.columns.push_back(require(name));
        }
        blocks.push_back(std::move(b));
    }

    std::vector<VoxelRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = tsv::chomp(line);
        if (view.empty()) {
            continue;
        }
        const auto cells = tsv::split(view);
        auto where = [&]() { return std::string(source) + ":" + std::to_string(line_no); };
        if (cells.size() != header.size()) {
            throw Error(ErrorCode::data, where() + ": expected " + std::to_string(header.size()) +
                                             " cells, found " + std::to_string(cells.size()));
        }

        VoxelRecord rec;
        rec.subject = std::string(cells[c_subject]);
        if (rec.subject.empty()) {
            throw Error(ErrorCode::data, where() + ": empty subject id");
        }
        for (int a = 0; a < 3; ++a) {
            long long v = 0;
            if (!tsv::parse_int(cells[c_ijk[a]], v)) {
                throw Error(ErrorCode::data, where() + ": voxel index '" +
                                                 std::string(cells[c_ijk[a]]) + "' is not an integer");
            }
            rec.ijk[a] = static_cast<std::int32_t>(v);
        }
        auto voxel = [&]() {
            return where() + " (subject " + rec.subject + ", voxel " + std::to_string(rec.ijk[0]) +
                   "," + std::to_string(rec.ijk[1]) + "," + std::to_string(rec.ijk[2]) + ")";
        };
        try {
            rec.labels = parse_label_set(cells[c_labels]);
        } catch (const Error& e) {
            throw Error(ErrorCode::data, voxel() + ": " + e.what());
        }

        for (auto& b : blocks) {
            for (std::size_t c : b.columns) {
                double v = 0.0;
                if (!tsv::parse_double(cells[c], v) || !std::isfinite(v)) {
                    throw Error(ErrorCode::data, voxel() + ": non-finite or malformed value '" +
                                                     std::string(cells[c]) + "' in column '" +
                                                     std::string(header[c]) + "'");
                }
                b.values.push_back(v);
            }
        }
        records.push_back(std::move(rec));
    }

    std::map<FeatureGroup, Matrix> features;
    for (auto& b : blocks) {
        features.emplace(b.group, Matrix(records.size(), group_dimension(b.group), std::move(b.values)));
    }
    return Dataset(std::move(records), std::move(features));
}

Dataset load_dataset(const std::string& path, const FeatureGroupSpec& schema) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::io, "cannot open feature table '" + path + "'");
    }
    return read_dataset(in, schema, path);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
    const auto groups = dataset.loaded_groups();
    out << "subject\ti\tj\tk\tlabels";
    for (FeatureGroup g : groups) {
        for (const auto& name : group_columns(g)) {
            out << '\t' << name;
        }
    }
    out << '\n';
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const auto& rec = dataset.record(r);
        out << rec.subject << '\t' << rec.ijk[0] << '\t' << rec.ijk[1] << '\t' << rec.ijk[2] << '\t'
            << format_label_set(rec.labels);
        for (FeatureGroup g : groups) {
            for (double v : dataset.group(g).row(r)) {
                out << '\t' << tsv::format_double(v);
            }
        }
        out << '\n';
    }
}

Matrix select_features(const Dataset& dataset, const FeatureGroupSpec& groups,
                       std::span<const std::size_t> rows) {
    if (groups.empty()) {
        throw Error(ErrorCode::invalid_argument, "no feature groups selected");
    }
    std::vector<const Matrix*> blocks;
    for (FeatureGroup g : groups.groups()) {
        blocks.push_back(&dataset.group(g));
    }
    Matrix out(rows.size(), groups.dimension());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto dst = out.row(r).begin();
        for (const Matrix* m : blocks) {
            auto src = m->row(rows[r]);
            dst = std::copy(src.begin(), src.end(), dst);
        }
    }
    return out;
}

Matrix select_features(const Dataset& dataset, const FeatureGroupSpec& groups) {
    std::vector<std::size_t> rows(dataset.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return select_features(dataset, groups, rows);
}

std::vector<std::array<double, 3>> recenter_coords(std::span<const std::array<std::int32_t, 3>> ijk) {
    std::vector<std::array<double, 3>> out(ijk.size());
    if (ijk.empty()) {
        return out;
    }
    std::array<std::int32_t, 3> lo = ijk.front();
    std::array<std::int32_t, 3> hi = ijk.front();
    for (const auto& p : ijk) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    }
    for (std::size_t n = 0; n < ijk.size(); ++n) {
        for (int a = 0; a < 3; ++a) {
            const double mid = 0.5 * (static_cast<double>(lo[a]) + static_cast<double>(hi[a]));
            out[n][a] = static_cast<double>(ijk[n][a]) - mid;
        }
    }
    return out;
}

std::vector<std::string> FoldPlan::training_subjects(std::size_t f) const {
    std::vector<std::string> out;
    for (std::size_t g = 0; g < folds.size(); ++g) {
        if (g != f) {
            out.insert(out.end(), folds[g].begin(), folds[g].end());
        }
    }
    return out;
}

FoldPlan make_folds(std::span<const std::string> subject_ids, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 2) {
        throw Error(ErrorCode::invalid_argument, "cross-validation needs at least two folds");
    }
    std::vector<std::string> ids(subject_ids.begin(), subject_ids.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (n_folds > ids.size()) {
        throw Error(ErrorCode::invalid_argument, "more folds (" + std::to_string(n_folds) +
                                                     ") than subjects (" +
                                                     std::to_string(ids.size()) + ")");
    }

    std::mt19937_64 rng(seed);
    for (std::size_t i = ids.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(ids[i - 1], ids[pick(rng)]);
    }

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.seed = seed;
    plan.folds.resize(n_folds);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        plan.folds[i % n_folds].push_back(ids[i]);
    }
    for (auto& f : plan.folds) {
        std::sort(f.begin(), f.end());
    }
    return plan;
}

} // namespace thalparc
