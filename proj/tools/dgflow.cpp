// Command-line front end: writes CSV/JSON artifacts for the manifold,
// Melnikov, fold, and horseshoe experiments.
//
// Exit codes: 0 success, 2 domain error, 3 numerical non-convergence, 4 IO.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dg/dg.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";
constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Opts {
    double A = 1.0;
    double eps = 0.1;
    double omega = 40.0;
    double t = kUnset;      // per-command default
    double p_min = kUnset;  // per-command default
    double p_max = kUnset;
    int n_samples = 400;
    int N = 100000;
    double delta = 0.05;
    int n_max = 12;
    int count = 10;
    double arclength = 1.0;
    std::uint64_t seed = 20240819;
    std::string out = "out";
    std::string config;
    bool analytic = false;
    bool numeric = false;
    bool log_column = false;
};

struct CommandCtx {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*> opts;
};

CommandCtx add_common(CLI::App& parent, const std::string& name, const std::string& desc,
                      Opts& o) {
    CommandCtx c;
    c.app = parent.add_subcommand(name, desc);
    c.opts["A"] = c.app->add_option("--A", o.A, "gyre strength A");
    c.opts["eps"] = c.app->add_option("--eps", o.eps, "perturbation amplitude");
    c.opts["omega"] = c.app->add_option("--omega", o.omega, "forcing frequency");
    c.opts["t"] = c.app->add_option("--t", o.t, "phase of the strobed map");
    c.opts["p-min"] = c.app->add_option("--p-min", o.p_min, "lower parameter bound");
    c.opts["p-max"] = c.app->add_option("--p-max", o.p_max, "upper parameter bound");
    c.opts["n-samples"] = c.app->add_option("--n-samples", o.n_samples, "grid resolution");
    c.opts["N"] = c.app->add_option("--N", o.N, "vertex budget for numeric curves");
    c.opts["delta"] = c.app->add_option("--delta", o.delta, "horseshoe strip width");
    c.opts["n-max"] = c.app->add_option("--n-max", o.n_max, "largest iterate in sweeps");
    c.opts["count"] = c.app->add_option("--count", o.count, "number of folds");
    c.opts["arclength"] =
        c.app->add_option("--arclength", o.arclength, "numeric growth target arclength");
    c.opts["seed"] = c.app->add_option("--seed", o.seed, "jitter seed");
    c.opts["out"] = c.app->add_option("--out", o.out, "output directory");
    c.opts["config"] = c.app->add_option("--config", o.config, "JSON config file");
    return c;
}

/// Flags beat the config file; the config file beats built-in defaults.
void apply_config(const CommandCtx& c, Opts& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw std::ios_base::failure("cannot open config file: " + o.config);
    json j = json::parse(in);
    auto given = [&](const char* key) {
        auto it = c.opts.find(key);
        return it != c.opts.end() && it->second->count() > 0;
    };
    auto load = [&](const char* key, auto& field) {
        if (j.contains(key) && !j[key].is_null() && !given(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    load("A", o.A);
    load("eps", o.eps);
    load("omega", o.omega);
    load("t", o.t);
    load("p-min", o.p_min);
    load("p-max", o.p_max);
    load("n-samples", o.n_samples);
    load("N", o.N);
    load("delta", o.delta);
    load("n-max", o.n_max);
    load("count", o.count);
    load("arclength", o.arclength);
    load("seed", o.seed);
    load("analytic", o.analytic);
    load("numeric", o.numeric);
    load("log-column", o.log_column);
}

json resolved_config(const std::string& command, const Opts& o) {
    json j;
    j["artifact_version"] = kArtifactVersion;
    j["command"] = command;
    j["A"] = o.A;
    j["eps"] = o.eps;
    j["omega"] = o.omega;
    j["t"] = o.t;
    j["p-min"] = o.p_min;
    j["p-max"] = o.p_max;
    j["n-samples"] = o.n_samples;
    j["N"] = o.N;
    j["delta"] = o.delta;
    j["n-max"] = o.n_max;
    j["count"] = o.count;
    j["arclength"] = o.arclength;
    j["seed"] = o.seed;
    j["analytic"] = o.analytic;
    j["numeric"] = o.numeric;
    j["log-column"] = o.log_column;
    return j;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / name, std::ios::binary);  // '\n' endings on every platform
    if (!f) throw std::ios_base::failure("cannot open output file: " + (dir / name).string());
    return f;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
    auto f = open_out(dir, name);
    f << j.dump(2) << '\n';
}

void write_config(const std::string& command, const Opts& o) {
    write_json(o.out, "config.json", resolved_config(command, o));
}

// ---------------------------------------------------------------- manifolds

void write_analytic_csv(const Opts& o, const json& meta, dg::ManifoldBranch which,
                        const std::string& name, const dg::FlowParams& prm) {
    auto f = open_out(o.out, name);
    f << "# " << meta.dump() << '\n';
    f << "p,x1,x2,kappa,s";
    if (o.log_column) f << ",ln_one_minus_x2";
    f << '\n';
    if (!(o.p_min < o.p_max) || o.n_samples < 1) return;  // empty range: header only
    double s = 0.0, prev_p = o.p_min;
    for (int i = 0; i <= o.n_samples; ++i) {
        const double p = o.p_min + (o.p_max - o.p_min) * i / o.n_samples;
        const dg::ManifoldSample m = dg::manifold_sample(which, p, o.t, prm);
        // 1e-8 instead of the library default: far from the anchor the speed
        // grows like e^{a|p|} and a tighter absolute tolerance is unreachable.
        if (i > 0) s += dg::arclength(prev_p, p, o.t, prm, which, 1e-8);
        prev_p = p;
        f << num(p) << ',' << num(m.position.x1) << ',' << num(m.position.x2) << ','
          << num(dg::curvature_from_sample(m)) << ',' << num(s);
        if (o.log_column) f << ',' << num(std::log(std::max(1e-300, 1.0 - m.position.x2)));
        f << '\n';
    }
}

void write_numeric_csv(const Opts& o, const json& meta, dg::ManifoldBranch which,
                       const std::string& name, const dg::FlowParams& prm) {
    dg::GrowthSettings gs;
    gs.refine.max_vertices = static_cast<std::size_t>(std::max(o.N, 16));
    const dg::PolylineCurve c = dg::grow_manifold(which, o.t, o.arclength, prm, gs);
    const dg::CurvatureProfile prof = dg::discrete_curvature(c);
    auto f = open_out(o.out, name);
    f << "# " << meta.dump() << '\n';
    f << "p,x1,x2,kappa,s";
    if (o.log_column) f << ",ln_one_minus_x2";
    f << '\n';
    for (std::size_t i = 0; i < c.size(); ++i) {
        const dg::PhasePoint& v = c.vertices[i];
        f << num(dg::parameter_from_x2(std::clamp(v.x2, 1e-12, 1.0 - 1e-12), prm)) << ','
          << num(v.x1) << ',' << num(v.x2) << ',' << num(prof.samples[i].kappa) << ','
          << num(c.arclengths[i]);
        if (o.log_column) f << ',' << num(std::log(std::max(1e-300, 1.0 - v.x2)));
        f << '\n';
    }
}

int cmd_manifolds(Opts o) {
    if (std::isnan(o.t)) o.t = 0.0;
    // Default to the trusted window of the O(eps) expansion; beyond it the
    // envelope integrals blow up like e^{a|p|}.
    if (std::isnan(o.p_min)) o.p_min = dg::kTrustedPMin;
    if (std::isnan(o.p_max)) o.p_max = dg::kTrustedPMax;
    if (!o.analytic && !o.numeric) o.analytic = true;
    const dg::FlowParams prm(o.A, o.eps, o.omega);
    const json meta = resolved_config("manifolds", o);
    write_config("manifolds", o);
    if (o.analytic) {
        write_analytic_csv(o, meta, dg::ManifoldBranch::Stable, "stable_analytic.csv", prm);
        write_analytic_csv(o, meta, dg::ManifoldBranch::Unstable, "unstable_analytic.csv", prm);
    }
    if (o.numeric) {
        write_numeric_csv(o, meta, dg::ManifoldBranch::Stable, "stable_numeric.csv", prm);
        write_numeric_csv(o, meta, dg::ManifoldBranch::Unstable, "unstable_numeric.csv", prm);
    }
    return 0;
}

// ----------------------------------------------------------------- melnikov

int cmd_melnikov(Opts o) {
    if (std::isnan(o.t)) o.t = 0.0;
    if (std::isnan(o.p_min)) o.p_min = -2.0;
    if (std::isnan(o.p_max)) o.p_max = 2.0;
    const dg::FlowParams prm(o.A, o.eps, o.omega);
    const json meta = resolved_config("melnikov", o);
    write_config("melnikov", o);

    auto f = open_out(o.out, "melnikov.csv");
    f << "# " << meta.dump() << '\n';
    f << "p,t,closed,quadrature,abs_err\n";
    double worst = 0.0;
    if (o.p_min < o.p_max && o.n_samples >= 1) {
        for (int j = 0; j < 4; ++j) {
            const double t = o.t + prm.period() * j / 4.0;
            for (int i = 0; i <= o.n_samples; ++i) {
                const double p = o.p_min + (o.p_max - o.p_min) * i / o.n_samples;
                const double cf = dg::melnikov_closed(p, t, prm).value;
                const double q = dg::melnikov_full(p, t, prm, dg::MelnikovMethod::Quadrature).value;
                worst = std::max(worst, std::abs(q - cf));
                f << num(p) << ',' << num(t) << ',' << num(cf) << ',' << num(q) << ','
                  << num(std::abs(q - cf)) << '\n';
            }
        }
    }

    json out;
    out["config"] = meta;
    out["R"] = dg::melnikov_amplitude(prm);
    const dg::FluxQuantities fq = dg::flux_quantities(prm);
    out["average_flux"] = fq.average_flux;
    out["lobe_area"] = fq.lobe_area;
    out["max_discrepancy"] = worst;
    out["self_check_below_1e-8"] = worst < 1e-8;
    json zeros = json::array();
    for (int m = -1000; m <= 1000; ++m) {
        const double z = dg::melnikov_zero(m, o.t, prm);
        if (z >= o.p_min && z <= o.p_max) zeros.push_back({{"m", m}, {"p", z}});
    }
    out["zeros"] = zeros;
    write_json(o.out, "melnikov.json", out);
    return 0;
}

// -------------------------------------------------------------------- folds

int cmd_folds(Opts o) {
    if (std::isnan(o.t)) o.t = 0.0;
    if (std::isnan(o.p_min)) o.p_min = -1.2;
    if (std::isnan(o.p_max)) o.p_max = 0.0;
    const dg::FlowParams prm(o.A, o.eps, o.omega);
    const json meta = resolved_config("folds", o);
    write_config("folds", o);

    const auto folds = dg::find_fold_points(o.p_min, o.p_max, o.t, prm, o.count);

    json out;
    out["config"] = meta;
    json table = json::array();
    for (const dg::FoldPoint& fp : folds) {
        table.push_back({{"index", fp.index},
                         {"p", fp.p},
                         {"s", fp.s},
                         {"kappa", fp.curvature},
                         {"x1", fp.position.x1},
                         {"x2", fp.position.x2}});
    }
    out["folds"] = table;
    const dg::SpacingRegression reg = dg::fold_spacing_regression(folds);
    out["regression"] = {{"slope", reg.slope}, {"intercept", reg.intercept}, {"r2", reg.r2}};

    // Cross-method check: curvature peaks of the sampled curve vs the folds.
    dg::PolylineCurve curve;
    curve.t = o.t;
    const int n = std::max(o.n_samples, 200);
    for (int i = 0; i <= n; ++i) {
        const double p = o.p_max + (o.p_min - o.p_max) * i / n;
        curve.vertices.push_back(dg::manifold_point(dg::ManifoldBranch::Stable, p, o.t, prm));
    }
    curve.recompute_arclengths();
    const auto peaks = dg::detect_curvature_peaks(curve, dg::discrete_curvature(curve), 0.5);
    json agreement = json::array();
    for (const dg::FoldPoint& fp : folds) {
        double peak_x2 = std::numeric_limits<double>::quiet_NaN(), gap = 1e300;
        for (const dg::FoldPoint& pk : peaks) {
            const double d = std::abs(pk.position.x2 - fp.position.x2);
            if (d < gap) {
                gap = d;
                peak_x2 = pk.position.x2;
            }
        }
        agreement.push_back({{"index", fp.index},
                             {"newton_x2", fp.position.x2},
                             {"nearest_peak_x2", peak_x2},
                             {"gap", gap}});
    }
    out["cross_method"] = agreement;
    write_json(o.out, "folds.json", out);

    auto f = open_out(o.out, "curvature_profile.csv");
    f << "# " << meta.dump() << '\n';
    f << "p,s,kappa\n";
    // Arclength from the common reference, built incrementally: one long
    // integral to the grid's top end, then per-cell increments.
    double s = dg::arclength(o.p_max, dg::kDefaultArclengthReferenceP, o.t, prm);
    std::vector<double> svals(static_cast<std::size_t>(n) + 1);
    for (int i = n; i >= 0; --i) {
        const double p = o.p_min + (o.p_max - o.p_min) * i / n;
        if (i < n)
            s += dg::arclength(p, o.p_min + (o.p_max - o.p_min) * (i + 1) / n, o.t, prm);
        svals[static_cast<std::size_t>(i)] = s;
    }
    for (int i = 0; i <= n; ++i) {
        const double p = o.p_min + (o.p_max - o.p_min) * i / n;
        f << num(p) << ',' << num(svals[static_cast<std::size_t>(i)]) << ','
          << num(dg::curvature(p, o.t, prm)) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------- horseshoe

int cmd_horseshoe(Opts o) {
    const dg::FlowParams prm(o.A, o.eps, o.omega);
    if (std::isnan(o.t)) o.t = 0.25 * prm.period();  // validated default phase
    const json meta = resolved_config("horseshoe", o);
    write_config("horseshoe", o);

    const dg::RegionA A = dg::build_region_A(o.t, o.delta, prm);
    const dg::RefinementPolicy refine = dg::horseshoe_refinement(
        A, 2e-4, 150.0, static_cast<std::size_t>(std::max(o.N, 1000)) * 20);
    const dg::HorseshoeSweep sweep = dg::horseshoe_sweep(A, o.n_max, prm, {}, refine, o.seed);

    json out;
    out["config"] = meta;
    out["region"] = json::array();
    for (const dg::PhasePoint& v : A.poly) out["region"].push_back({v.x1, v.x2});
    json rows = json::array();
    for (const dg::StripCountResult& r : sweep.rows) {
        rows.push_back({{"n", r.n},
                        {"strips", r.strips},
                        {"area_A", r.area_A},
                        {"area_image", r.area_image},
                        {"area_clip", r.area_clip},
                        {"vertices", r.vertices},
                        {"budget_exceeded", r.budget_exceeded}});
    }
    out["rows"] = rows;
    out["first_n_with_two"] = sweep.first_n_with_two;
    out["verdict"] = sweep.first_n_with_two > 0;
    out["verdict_text"] =
        sweep.first_n_with_two > 0
            ? ">=2 strips found at n=" + std::to_string(sweep.first_n_with_two)
            : "no n <= " + std::to_string(o.n_max) + " with >= 2 strips";

    if (sweep.first_n_with_two > 0) {
        dg::RefinementPolicy doubled = refine;
        doubled.max_vertices *= 2;
        const dg::StripCountResult audit =
            dg::strip_count(A, sweep.first_n_with_two, prm, {}, doubled, o.seed);
        out["audit"] = {{"n", audit.n},
                        {"strips", audit.strips},
                        {"vertices", audit.vertices},
                        {"max_vertices", doubled.max_vertices},
                        {"non_decreasing",
                         audit.strips >= sweep.rows[static_cast<std::size_t>(audit.n) - 1].strips}};
    } else {
        out["audit"] = nullptr;
    }
    write_json(o.out, "horseshoe.json", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-Gyre stretching/folding toolkit"};
    app.require_subcommand(1);
    Opts o;

    CommandCtx man = add_common(app, "manifolds", "analytic / numeric manifold curves", o);
    man.app->add_flag("--analytic", o.analytic, "write O(eps) expansion curves");
    man.app->add_flag("--numeric", o.numeric, "write numerically grown curves");
    man.app->add_flag("--log-column", o.log_column, "add a ln(1-x2) column");
    CommandCtx mel = add_common(app, "melnikov", "Melnikov distance, flux and zeros", o);
    CommandCtx fld = add_common(app, "folds", "fold points and spacing regression", o);
    CommandCtx hrs = add_common(app, "horseshoe", "strip-count horseshoe sweep", o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (man.app->parsed()) {
            apply_config(man, o);
            return cmd_manifolds(o);
        }
        if (mel.app->parsed()) {
            apply_config(mel, o);
            return cmd_melnikov(o);
        }
        if (fld.app->parsed()) {
            apply_config(fld, o);
            return cmd_folds(o);
        }
        apply_config(hrs, o);
        return cmd_horseshoe(o);
    } catch (const dg::DomainError& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 2;
    } catch (const dg::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 4;
    }
}
