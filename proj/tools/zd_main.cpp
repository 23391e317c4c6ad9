// Command-line front end: datum ingestion, backend selection, sweeps,
// verification suites, and CSV/JSON emission.
#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zd/bo_eps.hpp"
#include "zd/characteristics.hpp"
#include "zd/closedforms.hpp"
#include "zd/datum.hpp"
#include "zd/errors.hpp"
#include "zd/hardy.hpp"
#include "zd/io.hpp"
#include "zd/rational.hpp"
#include "zd/verify.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

zd::InitialDatum load_datum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read datum file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return zd::datum_from_json(buf.str());
}

std::string command_echo(int argc, char** argv) {
    std::string acc;
    for (int i = 0; i < argc; ++i) {
        if (i) acc += ' ';
        acc += argv[i];
    }
    return acc;
}

struct EvalArgs {
    std::string datum_path;
    double t = 0.0;
    std::string grid_spec = "-4:4:201";
    std::string backend = "characteristics";
    double sigma = 0.05;
    double epsilon = 0.1;
    std::string out_dir = ".";
};

const char* kBackends = "characteristics, rational, hardy, eps, closedform";

zd::ZDField eval_field(const zd::InitialDatum& d, const EvalArgs& a,
                       zd::RunManifest& manifest) {
    const std::vector<double> grid = zd::parse_grid_spec(a.grid_spec);
    if (a.backend == "characteristics") {
        if (!d.is_c1())
            throw CLI::ValidationError(
                "backend", "characteristics needs a C1 datum (mollify the step "
                           "first); valid pairs: " + std::string(kBackends));
        return zd::zd_grid(d, a.t, grid);
    }
    if (a.backend == "rational") {
        const zd::Rational* ra = d.get_if<zd::Rational>();
        if (ra == nullptr)
            throw CLI::ValidationError("backend",
                                       "rational backend needs a rational datum; "
                                       "valid pairs: " + std::string(kBackends));
        return zd::zd_grid_rational(*ra, a.t, grid);
    }
    if (a.backend == "hardy") {
        if (d.get_if<zd::Step>() != nullptr)
            throw CLI::ValidationError("backend",
                                       "hardy cannot take a raw step (mollify it); "
                                       "valid pairs: " + std::string(kBackends));
        manifest.extra["sigma"] = a.sigma;
        return zd::boundary_trace(d, a.t, grid, a.sigma);
    }
    if (a.backend == "eps") {
        zd::EpsRunConfig cfg;
        cfg.datum = d;
        cfg.epsilon = a.epsilon;
        cfg.t_final = a.t;
        const double need =
            d.support_radius() + std::abs(a.t) * (1.0 + 2.0 * d.sup_bound()) + 2.0;
        cfg.half_length = std::max({20.0, need, std::abs(grid.front()) + 1.0,
                                    std::abs(grid.back()) + 1.0});
        const zd::EpsSolution sol = zd::run(cfg);
        manifest.extra["epsilon"] = a.epsilon;
        manifest.extra["modes"] = cfg.modes;
        zd::ZDField field;
        field.t = a.t;
        field.grid = grid;
        field.backend = "eps";
        field.ell.assign(grid.size(), -1);
        field.caustic.assign(grid.size(), 0);
        // sample the periodic solution at the requested abscissae
        const std::vector<double>& u = sol.snapshots.back();
        const double dx = sol.xgrid[1] - sol.xgrid[0];
        for (double x : grid) {
            const double pos = (x + cfg.half_length) / dx;
            const long i0 = static_cast<long>(std::floor(pos));
            const double w = pos - i0;
            const long n = static_cast<long>(u.size());
            const double v0 = u[static_cast<std::size_t>(((i0 % n) + n) % n)];
            const double v1 = u[static_cast<std::size_t>((((i0 + 1) % n) + n) % n)];
            field.values.push_back((1.0 - w) * v0 + w * v1);
        }
        return field;
    }
    if (a.backend == "closedform") {
        const zd::Step* st = d.get_if<zd::Step>();
        const zd::PiecewiseLinear* pl = d.get_if<zd::PiecewiseLinear>();
        if (st == nullptr && pl == nullptr)
            throw CLI::ValidationError("backend",
                                       "closedform needs a step or piecewise-linear "
                                       "datum; valid pairs: " + std::string(kBackends));
        zd::ZDField field;
        field.t = a.t;
        field.grid = grid;
        field.backend = "closedform";
        for (double x : grid) {
            double v = 0.0;
            if (st != nullptr) {
                if (st->left != -1.0 || st->right != 1.0 || st->height != 1.0)
                    throw CLI::ValidationError(
                        "datum", "closedform step profile covers the unit step on "
                                 "]-1,1[ only");
                v = zd::zd_step(a.t, x);
            } else {
                v = zd::zd_piecewise_linear(*pl, a.t, x);
            }
            field.values.push_back(v);
            field.caustic.push_back(0);
        }
        field.ell.assign(grid.size(), -1);
        return field;
    }
    throw CLI::ValidationError("backend", "unknown backend '" + a.backend +
                                              "'; valid: " + std::string(kBackends));
}

int cmd_eval(const EvalArgs& a, const std::string& echo) {
    const auto start = Clock::now();
    const zd::InitialDatum d = load_datum(a.datum_path);
    zd::RunManifest manifest;
    manifest.command = echo;
    manifest.datum = nlohmann::json::parse(zd::datum_to_json(d));
    manifest.backends = {a.backend};
    manifest.grid_spec = a.grid_spec;
    manifest.tolerances = {{"root", zd::FanSolver::tol_root},
                           {"merge", zd::FanSolver::tol_merge},
                           {"caustic", zd::FanSolver::tol_caustic}};
    const zd::ZDField field = eval_field(d, a, manifest);
    fs::create_directories(a.out_dir);
    const std::string csv = (fs::path(a.out_dir) / "field.csv").string();
    zd::write_field_csv(field, csv);
    manifest.outputs = {csv};
    if (a.backend == "characteristics" && !d.is_zero()) {
        manifest.extra["caustics"] = zd::caustics_to_json(zd::critical_values(d, a.t));
    }
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    zd::write_manifest(manifest, (fs::path(a.out_dir) / "manifest.json").string());
    std::cout << "wrote " << csv << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& fixture_dir,
               const std::string& out_dir, const std::string& echo) {
    const auto start = Clock::now();
    zd::CheckOptions opt;
    opt.fixture_dir = fixture_dir;
    const std::vector<zd::CheckResult> results = zd::run_suite(suite, opt);
    bool all_passed = true;
    nlohmann::json report = nlohmann::json::array();
    for (const zd::CheckResult& res : results) {
        all_passed = all_passed && res.passed;
        std::cout << (res.passed ? "PASS" : "FAIL") << "  " << res.name << ": "
                  << res.detail << "  [" << zd::format_g17(res.seconds) << "s]\n";
        report.push_back({{"name", res.name},
                          {"passed", res.passed},
                          {"detail", res.detail},
                          {"seconds", res.seconds}});
    }
    fs::create_directories(out_dir);
    zd::RunManifest manifest;
    manifest.command = echo;
    manifest.backends = {"all"};
    manifest.suites[suite] = all_passed ? "pass" : "fail";
    manifest.extra["report"] = report;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    const std::string path = (fs::path(out_dir) / ("verify_" + suite + ".json")).string();
    manifest.outputs = {path};
    zd::write_manifest(manifest, path);
    std::cout << (all_passed ? "all checks passed" : "FAILURES present") << "\n";
    return all_passed ? 0 : 1;
}

// Worker count for a sweep: one thread per run, capped by ZD_THREADS (>= 1)
// and by the hardware.
std::size_t sweep_workers(std::size_t runs) {
    std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(
                                                 runs, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("ZD_THREADS"))
        w = std::max<std::size_t>(1, std::min<std::size_t>(w, std::strtoul(cap, nullptr, 10)));
    return w;
}

int cmd_eps_sweep(const std::string& datum_path, double t,
                  const std::vector<double>& epsilons, const std::string& out_dir,
                  const std::string& echo) {
    const auto start = Clock::now();
    const zd::InitialDatum d = load_datum(datum_path);
    // windows where the gap trend is robust to the oscillation phase of the
    // dispersive front (narrow windows can hit an interference null at one eps)
    const std::vector<zd::TestFunction> phis = {zd::TestFunction::bump(0.4, 1.2),
                                                zd::TestFunction::bump(0.2, 1.6),
                                                zd::TestFunction::bump(0.3, 1.7)};
    // independent runs in parallel; gap evaluation and all writing happen
    // serially afterwards in epsilon order, so outputs are schedule-independent
    std::vector<zd::EpsSolution> sols(epsilons.size());
    std::vector<std::exception_ptr> failures(epsilons.size());
    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (std::size_t i = cursor++; i < epsilons.size(); i = cursor++) {
            try {
                zd::EpsRunConfig cfg;
                cfg.datum = d;
                cfg.epsilon = epsilons[i];
                cfg.t_final = t;
                cfg.modes = 1 << 13;
                cfg.half_length =
                    std::max(20.0, d.support_radius() +
                                       std::abs(t) * (1.0 + 2.0 * d.sup_bound()) + 2.0);
                // half the CFL step keeps the RK4 L2 drift well under 1e-6
                cfg.dt = zd::effective_dt(cfg) / 2.0;
                sols[i] = zd::run(cfg);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = sweep_workers(epsilons.size()); w > 0; --w)
        pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : failures)
        if (e) std::rethrow_exception(e);

    fs::create_directories(out_dir);
    const std::string csv = (fs::path(out_dir) / "eps_sweep.csv").string();
    std::ofstream out(csv);
    out << "epsilon,phi_id,gap\n";
    std::vector<std::vector<double>> gaps(phis.size());
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        for (std::size_t p = 0; p < phis.size(); ++p) {
            const double g = zd::weak_gap(sols[i], d, t, phis[p]);
            gaps[p].push_back(g);
            out << zd::format_g17(epsilons[i]) << ',' << p << ','
                << zd::format_g17(g) << '\n';
        }
    }
    bool monotone = true;
    for (const std::vector<double>& gp : gaps)
        for (std::size_t i = 0; i + 1 < gp.size(); ++i)
            monotone = monotone && gp[i] > gp[i + 1];
    zd::RunManifest manifest;
    manifest.command = echo;
    manifest.datum = nlohmann::json::parse(zd::datum_to_json(d));
    manifest.backends = {"eps", "characteristics"};
    manifest.outputs = {csv};
    manifest.extra["monotone_trend"] = monotone ? "decreasing" : "violated";
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    zd::write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    std::cout << "gap trend: " << (monotone ? "decreasing" : "violated") << "\n";
    return 0;
}

int cmd_compare(const std::string& datum_path, double t, const std::string& grid_spec,
                const std::vector<std::string>& backends, double sigma,
                const std::string& out_dir, const std::string& echo) {
    const auto start = Clock::now();
    const zd::InitialDatum d = load_datum(datum_path);
    fs::create_directories(out_dir);
    zd::RunManifest manifest;
    manifest.command = echo;
    manifest.datum = nlohmann::json::parse(zd::datum_to_json(d));
    manifest.backends = backends;
    manifest.grid_spec = grid_spec;
    std::vector<zd::ZDField> fields;
    for (const std::string& b : backends) {
        EvalArgs a;
        a.t = t;
        a.grid_spec = grid_spec;
        a.backend = b;
        a.sigma = sigma;
        fields.push_back(eval_field(d, a, manifest));
        const std::string csv = (fs::path(out_dir) / ("field_" + b + ".csv")).string();
        zd::write_field_csv(fields.back(), csv);
        manifest.outputs.push_back(csv);
    }
    double worst = 0.0;
    for (std::size_t i = 1; i < fields.size(); ++i)
        for (std::size_t k = 0; k < fields[0].values.size(); ++k)
            worst = std::max(worst,
                             std::abs(fields[i].values[k] - fields[0].values[k]));
    manifest.extra["max_pairwise_difference"] = worst;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    zd::write_manifest(manifest, (fs::path(out_dir) / "manifest.json").string());
    std::cout << "max difference vs " << backends.front() << ": "
              << zd::format_g17(worst) << "\n";
    return 0;
}

int cmd_fixtures(const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (double t : {0.25, 1.0, 2.0}) {
        zd::ZDField field;
        field.t = t;
        field.grid = zd::parse_grid_spec("-2:" + std::to_string(2.0 * t + 2.0) + ":241");
        field.backend = "closedform";
        for (double x : field.grid) {
            field.values.push_back(zd::zd_step(t, x));
            field.ell.push_back(-1);
            field.caustic.push_back(0);
        }
        std::ostringstream name;
        name << "zd_step_t" << t << ".csv";
        zd::write_field_csv(field, (fs::path(out_dir) / name.str()).string());
        std::cout << "wrote " << (fs::path(out_dir) / name.str()).string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zero-dispersion profiles of the Benjamin-Ono equation"};
    app.require_subcommand(1);
    const std::string echo = command_echo(argc, argv);

    EvalArgs ea;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a profile on a grid");
    eval->add_option("--datum", ea.datum_path, "datum descriptor JSON")->required();
    eval->add_option("--t", ea.t, "evaluation time");
    eval->add_option("--grid", ea.grid_spec, "grid as lo:hi:n");
    eval->add_option("--backend", ea.backend, kBackends);
    eval->add_option("--sigma", ea.sigma, "trace height for the hardy backend");
    eval->add_option("--epsilon", ea.epsilon, "dispersion for the eps backend");
    eval->add_option("--out", ea.out_dir, "output directory");

    std::string suite = "all", fixture_dir = "data", verify_out = ".";
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "acceptance | invariants | all");
    verify->add_option("--fixtures", fixture_dir, "golden fixture directory");
    verify->add_option("--out", verify_out, "output directory");

    std::string sweep_datum;
    double sweep_t = 0.5;
    std::vector<double> epsilons = {0.2, 0.1, 0.05};
    std::string sweep_out = ".";
    CLI::App* sweep = app.add_subcommand("eps-sweep", "weak-gap trend in epsilon");
    sweep->add_option("--datum", sweep_datum, "datum descriptor JSON")->required();
    sweep->add_option("--t", sweep_t, "horizon");
    sweep->add_option("--epsilons", epsilons, "dispersion values")->delimiter(',');
    sweep->add_option("--out", sweep_out, "output directory");

    std::string cmp_datum, cmp_grid = "-4:4:201", cmp_out = ".";
    double cmp_t = 0.5, cmp_sigma = 0.05;
    std::vector<std::string> cmp_backends = {"characteristics", "rational"};
    CLI::App* cmp = app.add_subcommand("compare-backends", "cross-check backends");
    cmp->add_option("--datum", cmp_datum, "datum descriptor JSON")->required();
    cmp->add_option("--t", cmp_t, "evaluation time");
    cmp->add_option("--grid", cmp_grid, "grid as lo:hi:n");
    cmp->add_option("--backends", cmp_backends, kBackends)->delimiter(',');
    cmp->add_option("--sigma", cmp_sigma, "trace height for the hardy backend");
    cmp->add_option("--out", cmp_out, "output directory");

    std::string fix_out = "data";
    CLI::App* fixtures = app.add_subcommand("fixtures", "regenerate golden fixtures");
    fixtures->add_option("--out", fix_out, "fixture directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) return cmd_eval(ea, echo);
        if (verify->parsed()) return cmd_verify(suite, fixture_dir, verify_out, echo);
        if (sweep->parsed())
            return cmd_eps_sweep(sweep_datum, sweep_t, epsilons, sweep_out, echo);
        if (cmp->parsed())
            return cmd_compare(cmp_datum, cmp_t, cmp_grid, cmp_backends, cmp_sigma,
                               cmp_out, echo);
        if (fixtures->parsed()) return cmd_fixtures(fix_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
