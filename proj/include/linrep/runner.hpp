#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

namespace linrep::cli {

using json = nlohmann::ordered_json;

struct RunArtifacts {
    json result;
    std::filesystem::path output_dir;
    std::filesystem::path result_path;
};

/// Execute one configured run. Writes result.json plus per-subcommand CSV
/// artifacts into the output directory and returns the result document.
RunArtifacts run(const json& config);

json load_config(const std::filesystem::path& path);

/// Exit-code policy: 0 success, 2 validation, 3 budget, 4 numerical divergence.
int exit_code_for(const std::exception& e);

} // namespace linrep::cli
