#include "codafin/run_report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace codafin::app {

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream ss;
    ss << std::hex;
    ss.width(16);
    ss.fill('0');
    ss << h;
    return ss.str();
}

InputEcho read_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    InputEcho e;
    e.basename = path.filename().string();
    e.bytes = ss.str();
    e.checksum = fnv1a_hex(e.bytes);
    return e;
}

nlohmann::ordered_json ingestion_json(const ingest::PanelDataset& panel,
                                      const std::vector<ingest::Rejection>& dropped) {
    std::map<std::string, std::size_t> reasons;
    for (const auto& r : panel.rejected) ++reasons[r.reason];
    nlohmann::ordered_json by_reason = nlohmann::ordered_json::object();
    for (const auto& [k, v] : reasons) by_reason[k] = v;
    return {{"data_lines", panel.data_lines},
            {"accepted", panel.rows.size()},
            {"rejected", panel.rejected.size()},
            {"by_reason", by_reason},
            {"dropped_in_design", dropped.size()}};
}

nlohmann::ordered_json RunReport::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "codafin";
    j["version"] = CODAFIN_VERSION;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
    j["ingestion"] = ingestion;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : models) {
        nlohmann::ordered_json mj;
        mj["response"] = m.response;
        if (m.fit) {
            mj["status"] = "ok";
            mj["wald"] = lmm::wald_json(lmm::wald_report(*m.fit));
            mj["fit"] = lmm::fit_summary_json(*m.fit, *m.diagnostics);
        } else {
            mj["status"] = "failed";
            mj["error"] = m.error;
        }
        arr.push_back(std::move(mj));
    }
    j["models"] = std::move(arr);
    if (timestamp) j["timestamp"] = *timestamp;
    return j;
}

void write_compare_csv(std::ostream& out, const std::vector<ModelResult>& models) {
    std::vector<std::string> terms;
    for (const auto& m : models) {
        if (!m.fit) continue;
        for (const auto& row : lmm::wald_report(*m.fit))
            if (std::find(terms.begin(), terms.end(), row.name) == terms.end()) terms.push_back(row.name);
    }
    out << "term";
    for (const auto& m : models) out << ',' << m.response << "_coef," << m.response << "_se," << m.response << "_p";
    out << '\n';
    for (const auto& term : terms) {
        out << term;
        for (const auto& m : models) {
            std::optional<lmm::WaldRow> hit;
            if (m.fit) {
                for (const auto& row : lmm::wald_report(*m.fit))
                    if (row.name == term) hit = row;
            }
            if (hit) {
                out << ',' << ingest::format_number(hit->coefficient) << ',' << ingest::format_number(hit->se) << ','
                    << ingest::format_number(hit->p);
            } else {
                out << ",,,";
            }
        }
        out << '\n';
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace codafin::app
