#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace thalparc::cli {

/// Collects a command's artifacts in a hidden directory beside the final
/// location and moves them into place only on commit(). Anything still
/// staged when the object dies is deleted.
class OutputStage {
public:
    explicit OutputStage(std::filesystem::path output_dir);
    ~OutputStage();
    OutputStage(const OutputStage&) = delete;
    OutputStage& operator=(const OutputStage&) = delete;

    /// `name` may contain subdirectories ("fold_1/model.bin").
    void write(const std::string& name, std::string_view contents);
    std::filesystem::path staged_path(const std::string& name);
    void commit();

    const std::vector<std::string>& files() const noexcept { return files_; }

private:
    std::filesystem::path final_;
    std::filesystem::path staging_;
    std::vector<std::string> files_;
    bool committed_ = false;
};

} // namespace thalparc::cli
