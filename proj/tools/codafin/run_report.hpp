#pragma once

#include "codafin/ingest/panel.hpp"
#include "codafin/lmm/reml.hpp"
#include "codafin/lmm/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace codafin::app {

[[nodiscard]] std::string fnv1a_hex(std::string_view bytes);

struct InputEcho {
    std::string basename;
    std::string checksum;  ///< FNV-1a 64 of the file bytes, hex
    std::string bytes;
};

/// @throws std::runtime_error when the file cannot be read.
[[nodiscard]] InputEcho read_input(const std::filesystem::path& path);

/// Counts of accepted and rejected rows, rejections tallied by reason.
[[nodiscard]] nlohmann::ordered_json ingestion_json(const ingest::PanelDataset& panel,
                                                    const std::vector<ingest::Rejection>& dropped);

struct ModelResult {
    std::string response;
    std::optional<lmm::LmmFit> fit;
    std::optional<lmm::DiagnosticsBundle> diagnostics;
    std::string error;
};

/**
 * @brief Everything a compare run reports, serialized in a fixed key order.
 *
 * No wall-clock data unless `timestamp` is set.
 */
struct RunReport {
    std::string command;
    nlohmann::ordered_json config;
    std::optional<std::uint64_t> seed;
    nlohmann::ordered_json ingestion;
    std::vector<ModelResult> models;
    std::optional<std::string> timestamp;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Side-by-side table: term, then coef/se/p for each model in order.
void write_compare_csv(std::ostream& out, const std::vector<ModelResult>& models);

[[nodiscard]] std::string utc_timestamp();

}  // namespace codafin::app
