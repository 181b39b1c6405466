#include "output_stage.hpp"

#include "thalparc/error.hpp"

#include <algorithm>
#include <fstream>
#include <unistd.h>

namespace thalparc::cli {

namespace fs = std::filesystem;

OutputStage::OutputStage(fs::path output_dir) : final_(std::move(output_dir)) {
    std::error_code ec;
    fs::create_directories(final_, ec);
    if (ec) {
        throw Error(ErrorCode::io, "cannot create output directory " + final_.string() + ": " + ec.message());
    }
    staging_ = final_ / (".thalparc-staging-" + std::to_string(::getpid()));
    fs::remove_all(staging_, ec);
    fs::create_directories(staging_, ec);
    if (ec) {
        throw Error(ErrorCode::io, "cannot create staging directory: " + ec.message());
    }
}

OutputStage::~OutputStage() {
    std::error_code ec;
    fs::remove_all(staging_, ec);
}

fs::path OutputStage::staged_path(const std::string& name) {
    const fs::path p = staging_ / name;
    fs::create_directories(p.parent_path());
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) {
        files_.push_back(name);
    }
    return p;
}

void OutputStage::write(const std::string& name, std::string_view contents) {
    const fs::path p = staged_path(name);
    std::ofstream out(p, std::ios::binary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.close();
    if (!out) {
        throw Error(ErrorCode::io, "cannot write " + p.string());
    }
}

void OutputStage::commit() {
    std::vector<fs::path> moved;
    try {
        for (const auto& name : files_) {
            const fs::path target = final_ / name;
            fs::create_directories(target.parent_path());
            fs::rename(staging_ / name, target);
            moved.push_back(target);
        }
    } catch (const fs::filesystem_error& e) {
        std::error_code ec;
        for (const auto& p : moved) {
            fs::remove(p, ec);
        }
        throw Error(ErrorCode::io, std::string("cannot publish artifacts: ") + e.what());
    }
    committed_ = true;
}

} // namespace thalparc::cli
