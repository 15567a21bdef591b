#include "qlocality/cli.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qlocality/io.hpp"

namespace qlocality::cli {

namespace {

using io::Json;

constexpr const char* kLhvCaveat =
    "feasibility at finitely many settings does not certify a local model for all measurements";

struct LoadedFile {
    std::string path;
    std::string digest;
    Json json;
};

LoadedFile load(const std::string& path) {
    const std::string text = io::read_file(path);
    return {path, io::digest(text), io::parse(text)};
}

Json input_record(const LoadedFile& f) { return Json{{"path", f.path}, {"digest", f.digest}}; }

BellKind parse_bell_kind(const std::string& kind) {
    if (kind == "phi+") return BellKind::PhiPlus;
    if (kind == "phi-") return BellKind::PhiMinus;
    if (kind == "psi+") return BellKind::PsiPlus;
    if (kind == "psi-") return BellKind::PsiMinus;
    throw DomainError("unknown Bell state kind \"" + kind + "\" (phi+, phi-, psi+, psi-)");
}

std::vector<ProjectiveMeasurement> random_settings(std::size_t dim, std::size_t count, Rng& rng) {
    std::vector<ProjectiveMeasurement> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_measurement(dim, rng));
    return out;
}

// Runs `body`, turning exceptions into exit codes and writing the JSON report to `out_path`
// whatever the outcome.
int with_report(Json& report, const std::string& out_path, std::ostream& err,
                const std::function<int(Json&)>& body) {
    int code = kUsage;
    try {
        code = body(report);
    } catch (const NumericError& e) {
        report["error"] = {{"kind", "numeric"}, {"message", e.what()}};
        err << "numeric error: " << e.what() << "\n";
        code = kNumeric;
    } catch (const Error& e) {
        report["error"] = {{"kind", "input"}, {"message", e.what()}};
        err << "error: " << e.what() << "\n";
        code = kUsage;
    } catch (const std::exception& e) {
        report["error"] = {{"kind", "internal"}, {"message", e.what()}};
        err << "internal error: " << e.what() << "\n";
        code = kNumeric;
    }
    report["exit_code"] = code;
    if (!out_path.empty()) {
        try {
            io::write_file(out_path, io::dump(report));
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            if (code == kLocal || code == kNonlocal) code = kUsage;
        }
    }
    return code;
}

struct StateArgs {
    std::string family;
    double p = 1.0;
    std::string kind = "psi-";
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::size_t> dims{2, 2};
    std::string out;
};

int cmd_state(const StateArgs& a, std::ostream& out, std::ostream& err) {
    try {
        std::optional<DensityOperator> rho;
        if (a.family == "werner") {
            rho = werner_state(a.p);
        } else if (a.family == "bell") {
            rho = bell_state(parse_bell_kind(a.kind));
        } else if (a.family == "noisy-bell") {
            const auto v = bell_vector(parse_bell_kind(a.kind));
            rho = noisy_pure_state(v, 2, 2, a.p);
        } else if (a.family == "random") {
            if (a.dims.size() != 2 || a.dims[0] == 0 || a.dims[1] == 0) {
                throw DomainError("--dims needs two positive integers");
            }
            const auto r = random_density(a.dims[0] * a.dims[1], a.seed);
            rho = DensityOperator(r.matrix(), a.dims[0], a.dims[1]);
        } else {
            throw DomainError("unknown state family \"" + a.family + "\"");
        }
        const std::string text = io::dump(io::to_json(*rho));
        if (a.out.empty()) {
            out << text;
            return kLocal;
        }
        io::write_file(a.out, text);
        const auto spectrum = hermitian_eigenvalues(rho->matrix());
        out << "wrote " << a.family << " state (" << rho->dimA() << "x" << rho->dimB() << ") to "
            << a.out << "\nspectrum:";
        for (double v : spectrum) out << " " << std::setprecision(10) << v;
        out << "\n";
        return kLocal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
}

struct AnalyzeArgs {
    std::string state;
    std::string mode = "ppt";
    double tol = kDefaultTolerance;
    std::uint64_t seed = kDefaultSeed;
    std::size_t settings = 3;
    std::string out;
};

// Two-qubit states use the CHSH-optimal settings; anything else uses seeded random settings.
std::pair<std::vector<ProjectiveMeasurement>, std::vector<ProjectiveMeasurement>>
analysis_settings(const DensityOperator& rho, const AnalyzeArgs& a, Json& report) {
    if (rho.dimA() == 2 && rho.dimB() == 2) {
        const auto opt = chsh_optimum(rho);
        report["settings"] = {{"kind", "chsh-optimal"}, {"optimum", io::to_json(opt)}};
        return {opt.measurementsA(), opt.measurementsB()};
    }
    Rng rng(a.seed);
    report["settings"] = {{"kind", "random"}, {"seed", a.seed}, {"count", a.settings}};
    auto measA = random_settings(rho.dimA(), a.settings, rng);
    auto measB = random_settings(rho.dimB(), a.settings, rng);
    return {std::move(measA), std::move(measB)};
}

int cmd_analyze(const AnalyzeArgs& a, Json& report, std::ostream& out) {
    const auto file = load(a.state);
    report["input"] = input_record(file);
    report["mode"] = a.mode;
    report["tolerance"] = a.tol;
    const DensityOperator rho = io::state_from_json(file.json);
    report["validation"] = io::to_json(validate_density(rho.matrix()));

    out << std::setprecision(12);
    if (a.mode == "ppt") {
        const auto r = ppt_test(rho, a.tol);
        report["ppt"] = io::to_json(r);
        report["verdict"] = to_string(r.verdict);
        out << "PPT minimum eigenvalue  " << r.min_eigenvalue << "\n"
            << "verdict                 " << to_string(r.verdict) << "\n";
        return r.verdict == PptVerdict::Entangled ? kNonlocal : kLocal;
    }
    if (a.mode == "chsh") {
        if (rho.dimA() != 2 || rho.dimB() != 2) throw ShapeError("chsh mode needs a two-qubit state");
        const auto opt = chsh_optimum(rho);
        const auto measA = opt.measurementsA();
        const auto measB = opt.measurementsB();
        const auto behavior = behavior_from_state(rho, measA, measB);
        const double s = chsh_value(behavior);
        const bool violates = opt.value > 2.0 + a.tol;
        report["chsh_max"] = opt.value;
        report["optimum"] = io::to_json(opt);
        report["chsh_value_at_optimum"] = s;
        report["behavior"] = io::to_json(behavior);
        report["local_bound"] = 2.0;
        report["verdict"] = violates ? "chsh-violating" : "chsh-local";
        out << "CHSH maximum            " << opt.value << "\n"
            << "S at optimal settings   " << s << "\n"
            << "verdict                 " << (violates ? "chsh-violating" : "chsh-local") << "\n";
        return violates ? kNonlocal : kLocal;
    }
    if (a.mode == "lhv") {
        const auto [measA, measB] = analysis_settings(rho, a, report);
        const auto behavior = behavior_from_state(rho, measA, measB);
        const auto lhv = lhv_membership(behavior);
        report["behavior"] = io::to_json(behavior);
        report["lhv"] = io::to_json(lhv);
        report["caveat"] = kLhvCaveat;
        report["verdict"] = to_string(lhv.verdict);
        out << "LHV verdict             " << to_string(lhv.verdict) << "\n";
        if (lhv.verdict == LhvVerdict::Feasible) {
            out << "reconstruction error    " << lhv.reconstruction_error << "\n";
        } else {
            out << "dual bound              " << lhv.dual.bound << "\n"
                << "dual gap                " << lhv.gap << "\n";
        }
        return lhv.verdict == LhvVerdict::Infeasible ? kNonlocal : kLocal;
    }
    if (a.mode == "nosig") {
        Rng rng(a.seed);
        const auto measA = random_settings(rho.dimA(), a.settings, rng);
        const auto measB = random_settings(rho.dimB(), a.settings, rng);
        const auto behavior = behavior_from_state(rho, measA, measB);
        const double residual = no_signaling_residual(behavior);
        const bool ok = residual <= a.tol;
        report["settings"] = {{"kind", "random"}, {"seed", a.seed}, {"count", a.settings}};
        report["behavior"] = io::to_json(behavior);
        report["no_signaling_residual"] = residual;
        report["verdict"] = ok ? "no-signaling" : "signaling";
        out << "no-signaling residual   " << residual << "\n"
            << "verdict                 " << (ok ? "no-signaling" : "signaling") << "\n";
        return ok ? kLocal : kNonlocal;
    }
    throw DomainError("unknown analysis mode \"" + a.mode + "\"");
}

struct SimulateArgs {
    std::string model;
    std::uint64_t trials = 100000;
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    std::string out;
};

int cmd_simulate(const SimulateArgs& a, Json& report, std::ostream& out) {
    const auto file = load(a.model);
    report["input"] = input_record(file);
    const LocalModel model = io::model_from_json(file.json);
    const auto schedule = default_schedule(model.scenario());
    const auto sample = sample_local_model(model, a.trials, a.seed, schedule, a.workers);
    const auto exact = mix_local_model(model);

    double deviation = 0.0;
    for (std::size_t k = 0; k < exact.values().size(); ++k) {
        deviation = std::max(deviation, std::abs(sample.frequencies[k] - exact.values()[k]));
    }
    report["seed"] = a.seed;
    report["sample"] = io::to_json(sample);
    report["exact"] = io::to_json(exact);
    report["max_deviation"] = deviation;
    out << std::setprecision(12) << "trials                  " << sample.trials << "\n"
        << "max |empirical - exact| " << deviation << "\n";
    if (model.scenario() == kChshScenario && sample.complete()) {
        const double s_emp = chsh_value(sample.empirical());
        const double s_exact = chsh_value(exact);
        report["chsh_empirical"] = s_emp;
        report["chsh_exact"] = s_exact;
        out << "CHSH empirical          " << s_emp << "\n"
            << "CHSH exact              " << s_exact << "\n";
    }
    return kLocal;
}

struct ScanArgs {
    std::string family;
    std::string grid;
    std::string kind = "phi+";
    double tol = kDefaultTolerance;
    double boundary_tol = 1e-6;
    std::string out;
};

int cmd_scan(const ScanArgs& a, Json& report, std::ostream& out) {
    const auto grid = io::parse_grid(a.grid);
    StateFamily family = StateFamily::werner();
    if (a.family == "noisy-bell") {
        const auto v = bell_vector(parse_bell_kind(a.kind));
        family = StateFamily::noisy_pure({v.begin(), v.end()}, "noisy-bell-" + a.kind);
    } else if (a.family != "werner") {
        throw DomainError("unknown scan family \"" + a.family + "\"");
    }
    const auto result = scan_family(family, grid, {a.tol, a.boundary_tol});
    report["grid"] = a.grid;
    report["tolerance"] = a.tol;
    report["boundary_tolerance"] = a.boundary_tol;
    report["scan"] = io::to_json(result);

    out << std::left << std::setw(10) << "p" << std::setw(16) << "ppt min eig" << std::setw(14)
        << "chsh max" << std::setw(12) << "lhv" << "classification\n";
    for (const auto& row : result.rows) {
        out << std::setw(10) << std::setprecision(6) << row.parameter << std::setw(16)
            << std::setprecision(8) << row.ppt.min_eigenvalue << std::setw(14) << row.chsh_max
            << std::setw(12) << to_string(row.lhv_verdict) << to_string(row.regime) << "\n";
    }
    for (const auto& b : result.boundaries) {
        out << "boundary " << to_string(b.below) << " -> " << to_string(b.above) << " at "
            << std::setprecision(10) << b.estimate << "\n";
    }
    out << "note: " << result.caveat << "\n";
    return kLocal;
}

struct VerifyArgs {
    std::string state;
    std::string decomposition;
    double tol = 1e-10;
    std::string out;
};

int cmd_verify(const VerifyArgs& a, Json& report, std::ostream& out) {
    const auto state_file = load(a.state);
    const auto decomposition_file = load(a.decomposition);
    report["input"] = {input_record(state_file), input_record(decomposition_file)};
    const DensityOperator rho = io::state_from_json(state_file.json);
    const SeparableComponents c = io::decomposition_from_json(decomposition_file.json);
    const auto check = verify_separable_decomposition(rho, c, a.tol);
    report["tolerance"] = a.tol;
    report["components"] = c.size();
    report["residual"] = check.residual;
    report["verdict"] = check.certified ? "certified-separable" : "not-certified";
    if (rho.is_bipartite()) report["ppt"] = io::to_json(ppt_test(rho));
    out << std::setprecision(12) << "decomposition residual  " << check.residual << "\n"
        << "verdict                 " << (check.certified ? "certified-separable" : "not-certified")
        << "\n";
    return check.certified ? kLocal : kNonlocal;
}

std::string join(const std::vector<std::string>& args) {
    std::string s;
    for (const auto& a : args) {
        if (!s.empty()) s += ' ';
        s += a;
    }
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Separability, CHSH and local-hidden-variable analysis of two-party states",
                 "qlocality"};
    app.require_subcommand(1);

    StateArgs state_args;
    auto* state = app.add_subcommand("state", "Write a state file");
    state->add_option("family", state_args.family, "werner | bell | noisy-bell | random")
        ->required();
    state->add_option("--p", state_args.p, "mixing parameter in [0, 1]");
    state->add_option("--kind", state_args.kind, "Bell state: phi+ | phi- | psi+ | psi-");
    state->add_option("--seed", state_args.seed, "seed for the random family");
    state->add_option("--dims", state_args.dims, "subsystem dimensions for the random family")
        ->expected(2);
    state->add_option("--out", state_args.out, "output path (stdout when omitted)");

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Analyze a state file");
    analyze->add_option("state", analyze_args.state, "state file")->required();
    analyze->add_option("--mode", analyze_args.mode, "ppt | chsh | lhv | nosig")
        ->check(CLI::IsMember({"ppt", "chsh", "lhv", "nosig"}));
    analyze->add_option("--tol", analyze_args.tol, "verdict tolerance");
    analyze->add_option("--seed", analyze_args.seed, "seed for random settings");
    analyze->add_option("--settings", analyze_args.settings, "random settings per party")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--out", analyze_args.out, "JSON report path");

    SimulateArgs simulate_args;
    auto* simulate = app.add_subcommand("simulate", "Sample a local common-cause model");
    simulate->add_option("model", simulate_args.model, "local model file")->required();
    simulate->add_option("--trials", simulate_args.trials, "total trials (round-robin settings)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", simulate_args.seed, "sampling seed");
    simulate->add_option("--workers", simulate_args.workers, "sampling threads")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--out", simulate_args.out, "JSON report path");

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "Classify a one-parameter state family on a grid");
    scan->add_option("family", scan_args.family, "werner | noisy-bell")->required();
    scan->add_option("--grid", scan_args.grid, "start:stop:step or comma list")->required();
    scan->add_option("--kind", scan_args.kind, "Bell state for noisy-bell");
    scan->add_option("--tol", scan_args.tol, "verdict tolerance");
    scan->add_option("--boundary-tol", scan_args.boundary_tol, "boundary bisection tolerance");
    scan->add_option("--out", scan_args.out, "JSON report path");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Check a separable decomposition certificate");
    verify->add_option("state", verify_args.state, "state file")->required();
    verify->add_option("decomposition", verify_args.decomposition, "decomposition file")
        ->required();
    verify->add_option("--tol", verify_args.tol, "certificate tolerance");
    verify->add_option("--out", verify_args.out, "JSON report path");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kLocal;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kLocal;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    Json report{{"command", join(args)}};
    if (state->parsed()) return cmd_state(state_args, out, err);
    if (analyze->parsed()) {
        report["subcommand"] = "analyze";
        return with_report(report, analyze_args.out, err,
                           [&](Json& r) { return cmd_analyze(analyze_args, r, out); });
    }
    if (simulate->parsed()) {
        report["subcommand"] = "simulate";
        return with_report(report, simulate_args.out, err,
                           [&](Json& r) { return cmd_simulate(simulate_args, r, out); });
    }
    if (scan->parsed()) {
        report["subcommand"] = "scan";
        return with_report(report, scan_args.out, err,
                           [&](Json& r) { return cmd_scan(scan_args, r, out); });
    }
    report["subcommand"] = "verify";
    return with_report(report, verify_args.out, err,
                       [&](Json& r) { return cmd_verify(verify_args, r, out); });
}

}  // namespace qlocality::cli
