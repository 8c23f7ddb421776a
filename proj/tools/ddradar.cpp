#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddr/experiments.hpp"

namespace {

ddr::ExperimentConfig resolve_config(const std::string& profile, const std::string& config_path,
                                     std::uint64_t seed, bool seed_set) {
    ddr::ExperimentConfig cfg = profile == "full" ? ddr::full_profile() : ddr::ci_profile();
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw ddr::ConfigError("cannot open config file: " + config_path);
        std::stringstream ss;
        ss << is.rdbuf();
        ddr::ExperimentConfig file_cfg = ddr::config_from_json(ss.str());
        cfg = file_cfg;
    }
    if (seed_set) cfg.seed = seed;
    return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    os << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-Doppler radar waveform experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", profile = "ci";
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--profile", profile, "parameter profile")->check(CLI::IsMember({"ci", "full"}));
    CLI::Option* seed_opt = app.add_option("--seed", seed, "RNG seed override");

    CLI::App* heatmap = app.add_subcommand("heatmap", "cross-ambiguity surfaces for one scene");
    CLI::App* rectangles = app.add_subcommand("rectangles", "RMS error vs shrinking scene rectangles");
    CLI::App* snr = app.add_subcommand("snr-sweep", "RMS error vs SNR");
    std::vector<double> snr_list{-20.0, -15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
    snr->add_option("--snr", snr_list, "SNR points in dB");
    CLI::App* bench = app.add_subcommand("bench", "cross-ambiguity timing vs time-bandwidth product");
    std::vector<int> bt_list{1024, 2048, 4096, 8192, 16384};
    bench->add_option("--bt", bt_list, "time-bandwidth products to time");
    for (CLI::App* sub : {heatmap, rectangles, snr, bench}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        namespace fs = std::filesystem;
        ddr::ExperimentConfig cfg = resolve_config(profile, config_path, seed, seed_set);
        fs::create_directories(out_dir);
        if (heatmap->parsed()) {
            ddr::run_heatmap(cfg, out_dir);
        } else if (rectangles->parsed() || snr->parsed()) {
            std::vector<ddr::RmsRow> rows =
                rectangles->parsed() ? ddr::run_rectangles(cfg) : ddr::run_snr_sweep(cfg, snr_list);
            const char* name = rectangles->parsed() ? "rectangles.csv" : "snr_sweep.csv";
            std::ofstream os(fs::path(out_dir) / name);
            ddr::rms_table_to_csv(rows, os);
            write_text(fs::path(out_dir) / "report.json",
                       nlohmann::json{{"config", nlohmann::json::parse(ddr::config_to_json(cfg))},
                                      {"table", name}}
                               .dump(2) +
                           "\n");
        } else if (bench->parsed()) {
            ddr::BenchResult res = ddr::run_complexity_bench(bt_list);
            std::ofstream os(fs::path(out_dir) / "bench.csv");
            os << "bt,dd_seconds,td_seconds\n";
            os.precision(9);
            for (const ddr::BenchPoint& p : res.points)
                os << p.bt << ',' << p.dd_seconds << ',' << p.td_seconds << '\n';
            nlohmann::json j{{"dd_slope", res.dd_slope}, {"td_slope", res.td_slope}};
            write_text(fs::path(out_dir) / "bench.json", j.dump(2) + "\n");
            std::cout << "dd_slope " << res.dd_slope << " td_slope " << res.td_slope << "\n";
        }
    } catch (const ddr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ddr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
