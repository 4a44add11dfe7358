// Command-line driver: simulate | plan | sweep | moving | oracle-check.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "surfsim/config.hpp"
#include "surfsim/oracle_check.hpp"
#include "surfsim/report.hpp"

using namespace surfsim;

namespace {

RunConfig load_or_default(const std::string& config_path) {
    if (config_path.empty()) return RunConfig{};
    return load_config(config_path);
}

void apply_overrides(RunConfig& cfg, const std::string& output_dir, int workers, int64_t seed) {
    if (!output_dir.empty()) cfg.output_directory = output_dir;
    if (workers > 0) cfg.engine.workers = workers;
    if (seed >= 0) cfg.engine.seed = static_cast<uint64_t>(seed);
    if (cfg.engine.plan_cache_dir.empty())
        if (const char* env = std::getenv("SURFSIM_PLAN_CACHE")) cfg.engine.plan_cache_dir = env;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), fmt) != cfg.formats.end();
}

void write_report(const RunConfig& cfg, const LogicalChannelReport& rep,
                  const std::string& stem) {
    if (wants(cfg, "json"))
        write_file(cfg.output_directory, stem + ".json", report_json(rep).dump(2) + "\n");
    if (wants(cfg, "txt"))
        write_file(cfg.output_directory, stem + ".txt",
                   ptm_table_text(rep.aggregated_ptm) + "\nparameter_hash " +
                       hash_hex(rep.parameter_hash) + "\n");
    printf("%s\n", ptm_table_text(rep.aggregated_ptm).c_str());
    printf("p_bit=%.6e p_phase=%.6e p_y=%.6e  (runtime %.1fs, plan width %d, %d split edges)\n",
           rep.rates.p_bit, rep.rates.p_phase, rep.rates.p_y, rep.runtime_seconds,
           rep.plan_width, rep.split_edge_count);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-17 logical-channel tensor-network simulator"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    int workers = 0;
    int64_t seed = -1;
    app.add_option("--config", config_path, "configuration file (JSON)");
    app.add_option("--output-dir", output_dir, "output directory override");
    app.add_option("--workers", workers, "worker thread override");
    app.add_option("--seed", seed, "planner seed override");

    auto* simulate = app.add_subcommand("simulate", "run the memory experiment");
    auto* plan = app.add_subcommand("plan", "plan the contraction only");
    auto* sweep = app.add_subcommand("sweep", "crosstalk-strength sweep");
    auto* moving = app.add_subcommand("moving", "CPHASE-placement inaccuracy vs T1");
    auto* oracle = app.add_subcommand("oracle-check", "randomized dense-oracle equivalence suite");
    int oracle_count = 50;
    oracle->add_option("--count", oracle_count, "number of random circuits");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_or_default(config_path);
        apply_overrides(cfg, output_dir, workers, seed);
        const NoiseParameters noise = cfg.effective_noise();

        if (simulate->parsed()) {
            MemoryExperimentOptions mopts;
            mopts.expose_final_round = cfg.expose_final_round;
            mopts.pipelined = cfg.pipelined;
            LogicalChannelReport rep =
                run_memory_experiment(cfg.rounds, noise, cfg.crosstalk, cfg.engine, mopts);
            write_report(cfg, rep, "report");
        } else if (plan->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            MemoryExperimentOptions mopts;
            mopts.expose_final_round = cfg.expose_final_round;
            mopts.pipelined = cfg.pipelined;
            const MemoryExperimentCircuit mec =
                memory_experiment_circuit(cfg.rounds, noise, cfg.crosstalk, mopts);
            BoundaryOptions boundary;
            boundary.initial = BoundaryOptions::Initial::MEMORY_BELL;
            boundary.final_kind = BoundaryOptions::Final::CODEWORD_ISOMETRY;
            const BuiltNetwork built = network_from_circuit(mec.circuit, noise, boundary);
            const Hypergraph hg = line_graph(built.net);
            const TreeDecomposition td =
                tree_decompose(hg, built.net.open_indices, cfg.engine.plan_budget_seconds,
                               cfg.engine.seed, cfg.engine.min_restarts, cfg.engine.max_restarts);
            const ContractionPlan p = plan_from_decomposition(td, built.net.open_indices);
            const double dt =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            printf("width %d cost %.4g wall %.1fs (tensors %zu, open bits %zu)\n", p.width,
                   estimate_cost(hg, p), dt, built.net.nodes.size(), built.open_bits.size());
            if (!cfg.engine.plan_cache_dir.empty()) {
                PlanCache cache(cfg.engine.plan_cache_dir);
                ExecutionRecipe recipe;
                recipe.plan = p;
                cache.store(structural_hash(built.net), recipe);
                printf("plan cached\n");
            }
        } else if (sweep->parsed()) {
            std::vector<double> ks = cfg.sweep_k_values;
            if (ks.empty()) ks = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05};
            const auto series = sensitivity_sweep(ks, cfg.rounds, noise, cfg.engine, cfg.crosstalk);
            CrosstalkSpec probe;
            const uint64_t h = parameter_hash(noise, cfg.rounds, probe);
            const std::string csv = sweep_csv(series, h);
            if (wants(cfg, "csv")) write_file(cfg.output_directory, "sweep.csv", csv);
            printf("%s", csv.c_str());
        } else if (moving->parsed()) {
            std::vector<MovingRow> rows;
            for (double t1 : cfg.moving_t1_values) {
                NoiseParameters p = noise;
                p.T1 = t1;
                MovingRow row;
                row.t1 = t1;
                row.inaccuracy =
                    moving_inaccuracy(p, cfg.moving_pair, cfg.rounds, cfg.engine);
                rows.push_back(row);
                printf("T1=%g  inaccuracy=%.6e\n", t1, row.inaccuracy);
            }
            CrosstalkSpec probe;
            const uint64_t h = parameter_hash(noise, cfg.rounds, probe);
            if (wants(cfg, "csv"))
                write_file(cfg.output_directory, "moving.csv", moving_csv(rows, h));
        } else if (oracle->parsed()) {
            const OracleCheckResult res = run_oracle_equivalence_suite(
                oracle_count, seed >= 0 ? static_cast<uint64_t>(seed) : 12345);
            printf("%d circuits, max deviation %.3e, %.1fs: %s\n", res.circuits,
                   res.max_deviation, res.seconds, res.pass ? "PASS" : "FAIL");
            return res.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
