// freeconv command-line front end. Talks to the library through the C API only.

#include <freeconv/freeconv.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kBadInput = 1, kNumerical = 2, kViolation = 3 };

struct Failure : std::runtime_error {
    int code;
    Failure(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

void check(fc_status st)
{
    if (st == FC_OK) {
        return;
    }
    const std::string msg = fc_last_error();
    throw Failure(st == FC_INVALID_INPUT ? kBadInput : kNumerical, msg);
}

struct MeasureDel {
    void operator()(fc_measure* p) const { fc_measure_free(p); }
};
struct GridDel {
    void operator()(fc_grid* p) const { fc_grid_free(p); }
};
struct SupportDel {
    void operator()(fc_support* p) const { fc_support_free(p); }
};
using Measure = std::unique_ptr<fc_measure, MeasureDel>;
using Grid = std::unique_ptr<fc_grid, GridDel>;
using Support = std::unique_ptr<fc_support, SupportDel>;

std::string take(char* s)
{
    std::string out = s ? s : "";
    fc_string_free(s);
    return out;
}

struct Config {
    std::string command;
    std::vector<std::string> inputs;
    std::optional<double> t;
    std::vector<double> window;
    int points = 2001;
    std::string out;
    std::uint64_t seed = 1;
    int threads = 1;
    bool allow_atomic = false;
    std::string theorem;
    int size = 1000;
    int trials = 50;
    std::string ensemble = "unitary";
};

Measure load(const std::string& path, fc_path kind, bool allow_atomic)
{
    if (!fs::exists(path)) {
        throw Failure(kBadInput, "measure file not found: '" + path + "'");
    }
    fc_measure* mu = nullptr;
    check(fc_measure_load(path.c_str(), kind, allow_atomic ? 1 : 0, &mu));
    return Measure(mu);
}

bool is_semigroup(const Config& cfg)
{
    if (cfg.inputs.size() == 1) {
        if (!cfg.t) {
            throw Failure(kBadInput, "a single measure needs --t");
        }
        return true;
    }
    if (cfg.t) {
        throw Failure(kBadInput, "--t applies to a single measure only");
    }
    return false;
}

struct Run {
    std::vector<Measure> measures;
    Grid grid;
};

Run compute_grid(const Config& cfg)
{
    fc_grid_options opt;
    fc_grid_options_default(&opt);
    opt.n_points = cfg.points;
    opt.threads = cfg.threads;
    if (!cfg.window.empty()) {
        opt.has_window = 1;
        opt.window_lo = cfg.window[0];
        opt.window_hi = cfg.window[1];
    }
    Run run;
    fc_grid* g = nullptr;
    if (is_semigroup(cfg)) {
        if (!(*cfg.t > 1.0)) {
            throw Failure(kBadInput, "--t must exceed 1");
        }
        run.measures.push_back(load(cfg.inputs[0], FC_PATH_SEMIGROUP, cfg.allow_atomic));
        check(fc_semigroup_grid(run.measures[0].get(), *cfg.t, &opt, &g));
    } else {
        run.measures.push_back(load(cfg.inputs[0], FC_PATH_PAIR, false));
        run.measures.push_back(load(cfg.inputs[1], FC_PATH_PAIR, false));
        check(fc_convolve_grid(run.measures[0].get(), run.measures[1].get(), &opt, &g));
    }
    run.grid.reset(g);
    return run;
}

Support detect(const Run& run)
{
    fc_support* s = nullptr;
    check(fc_support_detect(run.grid.get(), &s));
    return Support(s);
}

void ensure_parent(const fs::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
}

void write_text(const fs::path& path, const std::string& text)
{
    ensure_parent(path);
    std::ofstream f(path, std::ios::binary);
    f << text << '\n';
    if (!f) {
        throw Failure(kBadInput, "cannot write '" + path.string() + "'");
    }
}

// JSON outputs go to --out when given, stdout otherwise.
void emit(const Config& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text << '\n';
    } else {
        write_text(cfg.out, text);
    }
}

fs::path sibling(const std::string& out, const std::string& name)
{
    const fs::path p(out);
    return p.has_parent_path() ? p.parent_path() / name : fs::path(name);
}

void write_meta(const Config& cfg, const Run* run, const std::vector<std::string>& outputs)
{
    json meta;
    meta["command"] = cfg.command;
    json inputs = json::array();
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
        json entry = {{"path", cfg.inputs[i]}};
        if (run != nullptr && i < run->measures.size()) {
            char* text = nullptr;
            check(fc_measure_to_json(run->measures[i].get(), &text));
            entry["spec"] = json::parse(take(text));
        }
        inputs.push_back(entry);
    }
    meta["inputs"] = inputs;
    json c = {{"points", cfg.points}, {"threads", cfg.threads}, {"allow_atomic", cfg.allow_atomic},
              {"seed", cfg.seed}};
    c["t"] = cfg.t ? json(*cfg.t) : json(nullptr);
    c["window"] = cfg.window.empty() ? json(nullptr) : json(cfg.window);
    if (cfg.command == "bounds-check") {
        c["theorem"] = cfg.theorem.empty() ? json("auto") : json(cfg.theorem);
    }
    if (cfg.command == "rmt-validate") {
        c["size"] = cfg.size;
        c["trials"] = cfg.trials;
        c["ensemble"] = cfg.ensemble;
    }
    meta["config"] = c;
    char* numerics = nullptr;
    check(fc_numerics_json(&numerics));
    meta["tolerances"] = json::parse(take(numerics));
    meta["versions"] = {{"freeconv", fc_version()}, {"cli", fc_version()}};
    meta["outputs"] = outputs;
    write_text(sibling(cfg.out, "run_meta.json"), meta.dump(2));
}

int run_grid(Config cfg)
{
    if (cfg.out.empty()) {
        cfg.out = "grid.csv";
    }
    Run run = compute_grid(cfg);
    ensure_parent(cfg.out);
    check(fc_grid_write_csv(run.grid.get(), cfg.out.c_str()));
    Support s = detect(run);
    char* text = nullptr;
    check(fc_support_to_json(s.get(), &text));
    fs::path support_path(cfg.out);
    support_path.replace_extension(".support.json");
    write_text(support_path, take(text));
    write_meta(cfg, &run, {cfg.out, support_path.string()});
    int I = 0, C0 = 0, Cinf = 0;
    check(fc_support_counts(s.get(), &I, &C0, &Cinf));
    std::cerr << "components " << I << ", interior zeros " << C0 << ", divergence points " << Cinf << '\n';
    return kOk;
}

int run_support(const Config& cfg)
{
    Run run = compute_grid(cfg);
    Support s = detect(run);
    char* text = nullptr;
    check(fc_support_to_json(s.get(), &text));
    emit(cfg, take(text));
    write_meta(cfg, &run, {cfg.out.empty() ? "-" : cfg.out});
    return kOk;
}

int run_bounds(const Config& cfg)
{
    Run run = compute_grid(cfg);
    Support s = detect(run);
    char* text = nullptr;
    int pass = 0;
    check(fc_bounds_check(run.grid.get(), s.get(), cfg.theorem.c_str(), &text, &pass));
    emit(cfg, take(text));
    write_meta(cfg, &run, {cfg.out.empty() ? "-" : cfg.out});
    if (!pass) {
        std::cerr << "bound violated\n";
        return kViolation;
    }
    return kOk;
}

int run_rmt(const Config& cfg)
{
    if (cfg.inputs.size() != 2) {
        throw Failure(kBadInput, "rmt-validate needs two measure files");
    }
    Run run = compute_grid(cfg);
    Support s = detect(run);
    fc_rmt_config rc;
    fc_rmt_config_default(&rc);
    rc.matrix_size = cfg.size;
    rc.trials = cfg.trials;
    rc.seed = cfg.seed;
    rc.threads = cfg.threads;
    rc.orthogonal = cfg.ensemble == "orthogonal" ? 1 : 0;
    char* text = nullptr;
    check(fc_rmt_validate(run.grid.get(), s.get(), &rc, &text));
    emit(cfg, take(text));
    write_meta(cfg, &run, {cfg.out.empty() ? "-" : cfg.out});
    return kOk;
}

void add_grid_flags(CLI::App* sub, Config& cfg)
{
    sub->add_option("--window", cfg.window, "Grid window LO HI")->expected(2);
    sub->add_option("--points", cfg.points, "Number of grid points")->check(CLI::Range(3, 10000000));
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1, 1024));
    sub->add_option("--seed", cfg.seed, "Random seed");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Free additive convolution of multi-cut measures"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fc_version()));
    Config cfg;

    auto* convolve = app.add_subcommand("convolve", "Density of mu_alpha boxplus mu_beta on a grid");
    convolve->add_option("alpha", cfg.inputs, "Measure files A.json B.json")->required()->expected(2);
    convolve->add_option("--out", cfg.out, "CSV output path (default grid.csv)");
    add_grid_flags(convolve, cfg);

    auto* semigroup = app.add_subcommand("semigroup", "Density of mu^{boxplus t} on a grid");
    semigroup->add_option("measure", cfg.inputs, "Measure file")->required()->expected(1);
    semigroup->add_option("--t", cfg.t, "Semigroup parameter t > 1")->required();
    semigroup->add_flag("--allow-atomic", cfg.allow_atomic, "Accept purely atomic measures");
    semigroup->add_option("--out", cfg.out, "CSV output path (default grid.csv)");
    add_grid_flags(semigroup, cfg);

    auto* support = app.add_subcommand("support", "Support report as JSON");
    support->add_option("measures", cfg.inputs, "One measure with --t, or two measures")->required()->expected(1, 2);
    support->add_option("--t", cfg.t, "Semigroup parameter t > 1");
    support->add_flag("--allow-atomic", cfg.allow_atomic, "Accept purely atomic measures");
    support->add_option("--out", cfg.out, "JSON output path (default stdout)");
    add_grid_flags(support, cfg);

    auto* bounds = app.add_subcommand("bounds-check", "Check the component-count bounds; exit 3 on violation");
    bounds->add_option("measures", cfg.inputs, "One measure with --t, or two measures")->required()->expected(1, 2);
    bounds->add_option("--t", cfg.t, "Semigroup parameter t > 1");
    bounds->add_flag("--allow-atomic", cfg.allow_atomic, "Accept purely atomic measures");
    bounds->add_option("--theorem", cfg.theorem, "Pair bound to apply")->check(CLI::IsMember({"1.3", "1.4"}));
    bounds->add_option("--out", cfg.out, "JSON output path (default stdout)");
    add_grid_flags(bounds, cfg);

    auto* rmt = app.add_subcommand("rmt-validate", "Compare with spectra of A + U B U*");
    rmt->add_option("measures", cfg.inputs, "Measure files A.json B.json")->required()->expected(2);
    rmt->add_option("--size", cfg.size, "Matrix size N")->check(CLI::Range(2, 100000));
    rmt->add_option("--trials", cfg.trials, "Number of trials")->check(CLI::Range(1, 1000000));
    rmt->add_option("--ensemble", cfg.ensemble, "unitary or orthogonal")
        ->check(CLI::IsMember({"unitary", "orthogonal"}));
    rmt->add_option("--out", cfg.out, "JSON output path (default stdout)");
    add_grid_flags(rmt, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (!cfg.window.empty() && !(cfg.window[0] < cfg.window[1])) {
            throw Failure(kBadInput, "--window needs LO < HI");
        }
        if (convolve->parsed()) {
            cfg.command = "convolve";
            return run_grid(cfg);
        }
        if (semigroup->parsed()) {
            cfg.command = "semigroup";
            return run_grid(cfg);
        }
        if (support->parsed()) {
            cfg.command = "support";
            return run_support(cfg);
        }
        if (bounds->parsed()) {
            cfg.command = "bounds-check";
            return run_bounds(cfg);
        }
        cfg.command = "rmt-validate";
        return run_rmt(cfg);
    } catch (const Failure& e) {
        std::cerr << "freeconv: error: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "freeconv: error: " << e.what() << '\n';
        return kBadInput;
    }
}
