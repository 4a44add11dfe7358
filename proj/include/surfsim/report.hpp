#pragma once

// Result persistence: JSON report, plain-text PTM table, and CSV series.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "surfsim/experiment.hpp"

namespace surfsim {

inline std::string hash_hex(uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline nlohmann::json report_json(const LogicalChannelReport& rep) {
    nlohmann::json j;
    nlohmann::json ptm = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back(rep.aggregated_ptm.matrix(r, c));
        ptm.push_back(row);
    }
    j["ptm"] = ptm;
    j["rates"] = {{"p_bit", rep.rates.p_bit},
                  {"p_phase", rep.rates.p_phase},
                  {"p_y", rep.rates.p_y},
                  {"rotations",
                   {rep.rates.rotations(0), rep.rates.rotations(1), rep.rates.rotations(2)}}};
    j["total_probability"] = rep.total_probability;
    j["skipped_syndromes"] = rep.skipped_syndromes;
    j["metadata"] = {{"rounds", rep.rounds},
                     {"kt_region", rep.kt_region},
                     {"parameter_hash", hash_hex(rep.parameter_hash)},
                     {"runtime_seconds", rep.runtime_seconds},
                     {"plan_width", rep.plan_width},
                     {"split_edges", rep.split_edge_count},
                     {"open_bits", rep.open_bit_count}};
    if (!rep.per_syndrome.empty()) {
        nlohmann::json per = nlohmann::json::array();
        const char* pauli = "IXYZ";
        for (size_t s = 0; s < rep.per_syndrome.size(); ++s) {
            const SyndromeRecord& r = rep.per_syndrome[s];
            nlohmann::json e;
            e["syndrome"] = s;
            e["probability"] = r.probability;
            e["correction"] = std::string(1, pauli[r.correction]);
            nlohmann::json m = nlohmann::json::array();
            for (int a = 0; a < 4; ++a) {
                nlohmann::json row = nlohmann::json::array();
                for (int b = 0; b < 4; ++b) row.push_back(r.ptm.matrix(a, b));
                m.push_back(row);
            }
            e["ptm"] = m;
            per.push_back(std::move(e));
        }
        j["per_syndrome"] = std::move(per);
    }
    return j;
}

// Plain-text 4x4 PTM rendering for eyeball comparison.
inline std::string ptm_table_text(const PauliTransferMatrix& ptm) {
    static const char* labels[4] = {"I", "X", "Y", "Z"};
    std::ostringstream os;
    os << "      ";
    for (int c = 0; c < 4; ++c) os << std::setw(14) << labels[c];
    os << "\n";
    for (int r = 0; r < 4; ++r) {
        os << std::setw(4) << labels[r] << "  ";
        for (int c = 0; c < 4; ++c)
            os << std::setw(14) << std::setprecision(6) << std::scientific
               << ptm.matrix(r, c);
        os << "\n";
    }
    return os.str();
}

inline std::string sweep_csv(const std::vector<SweepPoint>& series, uint64_t param_hash) {
    std::ostringstream os;
    os << "# parameter_hash=" << hash_hex(param_hash) << "\n";
    os << "kt_region,p_bit,p_phase,p_y,rot_x,rot_y,rot_z,ptm_xx,ptm_yy,ptm_zz,ptm_xy,ptm_yx\n";
    os << std::setprecision(15) << std::scientific;
    for (const auto& pt : series)
        os << pt.kt_region << "," << pt.p_bit << "," << pt.p_phase << "," << pt.p_y << ","
           << pt.rotations(0) << "," << pt.rotations(1) << "," << pt.rotations(2) << ","
           << pt.ptm.matrix(1, 1) << "," << pt.ptm.matrix(2, 2) << "," << pt.ptm.matrix(3, 3)
           << "," << pt.ptm.matrix(1, 2) << "," << pt.ptm.matrix(2, 1) << "\n";
    return os.str();
}

struct MovingRow {
    double t1 = 0;
    double inaccuracy = 0;
};

inline std::string moving_csv(const std::vector<MovingRow>& rows, uint64_t param_hash) {
    std::ostringstream os;
    os << "# parameter_hash=" << hash_hex(param_hash) << "\n";
    os << "T1,one_norm_inaccuracy\n";
    os << std::setprecision(15) << std::scientific;
    for (const auto& r : rows) os << r.t1 << "," << r.inaccuracy << "\n";
    return os.str();
}

inline void write_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + name + " in " + dir);
    out << content;
}

}  // namespace surfsim
