#include "thalparc/labels.hpp"

#include "thalparc/error.hpp"

namespace thalparc {

namespace {

constexpr std::array<std::string_view, kNumLabelCodes> kCodes{
    "AN", "CL", "CM", "LD", "LP", "MD", "PuA", "PuI", "VA", "VLa", "VLP", "VPL", "VPM", "Conflicted"};

} // namespace

std::string_view nucleus_code(Nucleus n) { return kCodes[index_of(n)]; }

std::optional<Nucleus> parse_nucleus(std::string_view code) {
    for (std::size_t i = 0; i < kCodes.size(); ++i) {
        if (kCodes[i] == code) {
            return static_cast<Nucleus>(i);
        }
    }
    // Accepted alias.
    if (code == "VLA") {
        return Nucleus::VLa;
    }
    return std::nullopt;
}

std::vector<Nucleus> LabelSet::members() const {
    std::vector<Nucleus> out;
    for (std::size_t i = 0; i < kNumLabelCodes; ++i) {
        if (contains(static_cast<Nucleus>(i))) {
            out.push_back(static_cast<Nucleus>(i));
        }
    }
    return out;
}

LabelSet parse_label_set(std::string_view text) {
    LabelSet set;
    while (!text.empty()) {
        const auto pos = text.find(';');
        const auto token = text.substr(0, pos);
        if (!token.empty()) {
            const auto n = parse_nucleus(token);
            if (!n) {
                throw Error(ErrorCode::data, "unknown label code '" + std::string(token) + "'");
            }
            set.insert(*n);
        }
        if (pos == std::string_view::npos) {
            break;
        }
        text.remove_prefix(pos + 1);
    }
    return set;
}

std::string format_label_set(const LabelSet& labels) {
    std::string out;
    for (Nucleus n : labels.members()) {
        if (!out.empty()) {
            out += ';';
        }
        out += nucleus_code(n);
    }
    return out;
}

} // namespace thalparc
