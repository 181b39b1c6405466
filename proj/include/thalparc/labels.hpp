#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thalparc {

/// Thalamic nuclei in schema order. Ties in voting fall back to this order.
enum class Nucleus : std::uint8_t {
    AN,
    CL,
    CM,
    LD,
    LP,
    MD,
    PuA,
    PuI,
    VA,
    VLa,
    VLP,
    VPL,
    VPM,
    Conflicted,
};

inline constexpr std::size_t kNumNuclei = 13;      // scored labels
inline constexpr std::size_t kNumLabelCodes = 14;  // plus Conflicted

inline constexpr std::array<Nucleus, kNumNuclei> kScoredNuclei{
    Nucleus::AN, Nucleus::CL,  Nucleus::CM, Nucleus::LD,  Nucleus::LP,  Nucleus::MD, Nucleus::PuA,
    Nucleus::PuI, Nucleus::VA, Nucleus::VLa, Nucleus::VLP, Nucleus::VPL, Nucleus::VPM};

/// Column order of the per-fold Dice tables (VLP before VLa).
inline constexpr std::array<Nucleus, kNumNuclei> kReportOrder{
    Nucleus::AN, Nucleus::CL,  Nucleus::CM,  Nucleus::LD,  Nucleus::LP,  Nucleus::MD, Nucleus::PuA,
    Nucleus::PuI, Nucleus::VA, Nucleus::VLP, Nucleus::VLa, Nucleus::VPL, Nucleus::VPM};

std::string_view nucleus_code(Nucleus n);
std::optional<Nucleus> parse_nucleus(std::string_view code);

inline constexpr std::size_t index_of(Nucleus n) { return static_cast<std::size_t>(n); }

/// Small set of label codes stored as a bitmask.
class LabelSet {
public:
    constexpr LabelSet() = default;

    constexpr void insert(Nucleus n) { bits_ |= bit(n); }
    constexpr void erase(Nucleus n) { bits_ &= static_cast<std::uint16_t>(~bit(n)); }
    constexpr bool contains(Nucleus n) const { return (bits_ & bit(n)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr std::uint16_t bits() const { return bits_; }

    /// Copy without the Conflicted code.
    constexpr LabelSet scored() const {
        LabelSet s = *this;
        s.erase(Nucleus::Conflicted);
        return s;
    }

    std::vector<Nucleus> members() const;

    constexpr bool operator==(const LabelSet&) const = default;

private:
    static constexpr std::uint16_t bit(Nucleus n) {
        return static_cast<std::uint16_t>(1u << static_cast<unsigned>(n));
    }
    std::uint16_t bits_ = 0;
};

/// Parses a semicolon-separated list ("MD;CL"); empty text is the empty set.
/// Throws ErrorCode::data on an unknown code.
LabelSet parse_label_set(std::string_view text);
std::string format_label_set(const LabelSet& labels);

} // namespace thalparc
