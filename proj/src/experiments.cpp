#include "cfq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "cfq/brownian.hpp"
#include "cfq/config.hpp"
#include "cfq/constraint_engine.hpp"
#include "cfq/matrix_io.hpp"
#include "cfq/nu_sweep.hpp"
#include "cfq/propagator.hpp"
#include "cfq/quantizer.hpp"

namespace cfq {

namespace {

struct Ctx {
    ConfigView root;
    std::string out_dir;
    std::string hash;
    std::uint64_t seed = 0;
    int workers = 1;
    RunManifest manifest;
    Warnings warnings;
    RunResult result;
    nlohmann::json report;

    void note(std::string line) { result.summary.push_back(std::move(line)); }

    void check(bool ok, const std::string& what) {
        note(std::string(ok ? "PASS" : "FAIL") + "  " + what);
        if (!ok) result.exit_code = 2;
    }

    void value(const std::string& what, double v) {
        std::ostringstream os;
        os << "      " << what << " = " << format_g17(v);
        note(os.str());
    }

    void artifact(const std::string& name) { manifest.artifacts.push_back(name); }

    std::string path(const std::string& name) const { return out_dir + "/" + name; }

    std::vector<std::string> csv_comments() const { return {"config_hash=" + hash}; }

    void write_report(const std::string& name) {
        report["config_hash"] = hash;
        write_json_file(report, path(name));
        artifact(name);
    }
};

const std::vector<std::string> kCommonKeys = {"experiment", "seed", "workers", "out_dir"};

// Backing storage for optional config sections accessed through a ConfigView
// (the view holds a pointer, so the object must outlive it).
const nlohmann::json kEmptySection = nlohmann::json::object();

std::vector<std::string> with_common(std::vector<std::string> keys) {
    keys.insert(keys.end(), kCommonKeys.begin(), kCommonKeys.end());
    return keys;
}

nlohmann::json complex_json(cxd z) {
    return nlohmann::json{{"re", z.real()}, {"im", z.imag()}};
}

bool symbol_is_oscillator(const PolySymbol& h) {
    return (h - oscillator_symbol(h.dof())).max_abs_coeff() == 0.0;
}

ConstraintSet parse_constraint_set(const Ctx& ctx, int dof) {
    ConstraintSet set;
    set.dof = dof;
    const ConfigView c = ctx.root.child("constraint");
    if (c.raw().is_array()) {
        long index = 0;
        for (const auto& item : c.raw()) {
            const ConfigView one(item, c.path() + "/" + std::to_string(index++));
            set.phis.push_back(parse_symbol(one, dof));
        }
    } else {
        set.phis.push_back(parse_symbol(c, dof));
    }
    return set;
}

std::vector<double> random_uniform(std::mt19937_64& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

// ---------------------------------------------------------------------------

void run_quantize(Ctx& ctx) {
    ctx.root.allow_keys(
        with_common({"space", "symbol", "quadrature", "agreement_tol"}));
    const FockSpace space = parse_space(ctx.root.child("space"));
    const PolySymbol h = parse_symbol(ctx.root.child("symbol"), space.dof());
    const double tol = ctx.root.number_or("agreement_tol", 1e-8);

    const FockOperator combinatorial = anti_wick(space, h);
    PhaseQuadrature rule;
    if (const auto qv = ctx.root.child_opt("quadrature")) {
        qv->allow_keys({"radial", "angular"});
        rule = polar_phase_rule(static_cast<int>(qv->integer("radial")),
                                static_cast<int>(qv->integer("angular")));
    } else {
        rule = default_phase_rule(space.cutoff(), h.degree());
    }
    const FockOperator quadrature = anti_wick_quadrature(space, h, rule);
    const double backend_dev =
        low_block_max_abs(space, Mat(combinatorial.matrix() - quadrature.matrix()));

    ctx.report["symbol"] = h.to_string();
    ctx.report["space"] = {{"cutoff", space.cutoff()}, {"dof", space.dof()}};
    ctx.report["quadrature"] = {{"radial", rule.radial_order},
                                {"angular", rule.angular_points}};
    ctx.report["backend_low_block_deviation"] = backend_dev;
    ctx.value("backend low-block deviation", backend_dev);
    ctx.check(backend_dev <= tol, "combinatorial and quadrature backends agree");

    if (symbol_is_oscillator(h)) {
        // Closed-form identity: each mode contributes (P^2 + Q^2 + 1)/2.
        Mat target = Mat::Zero(space.dim(), space.dim());
        for (const CanonicalPair& cp : canonical_ops(space))
            target += 0.5 * (cp.P.matrix() * cp.P.matrix() + cp.Q.matrix() * cp.Q.matrix());
        target += 0.5 * static_cast<double>(space.dof()) *
                  Mat::Identity(space.dim(), space.dim());
        const double target_dev =
            low_block_max_abs(space, Mat(combinatorial.matrix() - target));
        ctx.report["oscillator_identity_deviation"] = target_dev;
        ctx.value("oscillator identity deviation", target_dev);
        ctx.check(target_dev <= tol, "matches (P^2+Q^2+1)/2 per mode");
    }

    write_json_file(operator_to_json(combinatorial), ctx.path("operator.json"));
    ctx.artifact("operator.json");
    ctx.write_report("quantize_report.json");
}

void run_resolution(Ctx& ctx) {
    ctx.root.allow_keys(
        with_common({"space", "radial_orders", "tol", "monotone_slack"}));
    const FockSpace space = parse_space(ctx.root.child("space"));
    std::vector<long> orders = {4, 8, 16, 32};
    if (ctx.root.has("radial_orders")) orders = ctx.root.integer_list("radial_orders");
    if (orders.empty()) ctx.root.fail("'radial_orders' must not be empty");
    const double tol = ctx.root.number_or("tol", 1e-6);
    // Refinement may only shrink the deviation up to the machine floor; the
    // slack absorbs last-digit jitter once a ladder step is already exact.
    const double slack = ctx.root.number_or("monotone_slack", 1e-12);

    std::ostringstream csv;
    for (const std::string& c : ctx.csv_comments()) csv << "# " << c << '\n';
    csv << "radial,angular,low_block_deviation,full_deviation\n";
    std::vector<double> devs;
    for (long r : orders) {
        const int angular = static_cast<int>(2 * r);
        const ResolutionReport rep =
            resolution_check(space, polar_phase_rule(static_cast<int>(r), angular));
        devs.push_back(rep.low_block_deviation);
        csv << r << ',' << angular << ',' << format_g17(rep.low_block_deviation) << ','
            << format_g17(rep.full_deviation) << '\n';
        ctx.value("radial " + std::to_string(r) + " low-block deviation",
                  rep.low_block_deviation);
    }
    write_text_file(ctx.path("resolution.csv"), csv.str());
    ctx.artifact("resolution.csv");

    bool non_increasing = true;
    for (std::size_t i = 1; i < devs.size(); ++i)
        if (devs[i] > devs[i - 1] + slack) non_increasing = false;
    ctx.report["low_block_deviations"] = devs;
    ctx.check(devs.back() <= tol, "finest rule reaches the identity tolerance");
    ctx.check(non_increasing, "deviation non-increasing under refinement");
    ctx.write_report("resolution_report.json");
}

void run_propagate(Ctx& ctx) {
    ctx.root.allow_keys(
        with_common({"space", "symbol", "T", "x_start", "x_end", "times"}));
    const FockSpace space = parse_space(ctx.root.child("space"));
    const PolySymbol h = parse_symbol(ctx.root.child("symbol"), space.dof());
    const double T = ctx.root.number("T");
    const PhasePoint x_start = parse_point(ctx.root.child("x_start"), space.dof());
    const PhasePoint x_end = parse_point(ctx.root.child("x_end"), space.dof());
    const long times = ctx.root.integer_or("times", 9);
    if (!(T > 0.0)) ctx.root.fail("'T' must be positive");
    if (times < 2) ctx.root.fail("'times' must be at least 2");

    const SpectralPropagator prop(anti_wick(space, h));
    std::ostringstream csv;
    for (const std::string& c : ctx.csv_comments()) csv << "# " << c << '\n';
    csv << "t,amplitude_re,amplitude_im,amplitude_abs\n";
    cxd final_value = 0.0;
    for (long k = 0; k < times; ++k) {
        const double t = T * static_cast<double>(k) / static_cast<double>(times - 1);
        const cxd a = exact_propagator(prop, t, x_end, x_start, {}, &ctx.warnings);
        if (k == times - 1) final_value = a;
        csv << format_g17(t) << ',' << format_g17(a.real()) << ',' << format_g17(a.imag())
            << ',' << format_g17(std::abs(a)) << '\n';
    }
    write_text_file(ctx.path("propagate.csv"), csv.str());
    ctx.artifact("propagate.csv");

    ctx.report["T"] = T;
    ctx.report["amplitude"] = complex_json(final_value);
    ctx.value("amplitude re", final_value.real());
    ctx.value("amplitude im", final_value.imag());
    ctx.write_report("propagate_report.json");
}

void run_sweep_experiment(Ctx& ctx) {
    ctx.root.allow_keys(with_common({"symbol", "T", "x_start", "x_end", "nu_list",
                                     "policy", "require_monotone", "max_final_error"}));
    const PolySymbol h = parse_symbol(ctx.root.child("symbol"), 1);
    const double T = ctx.root.number("T");
    const PhasePoint x_start = parse_point(ctx.root.child("x_start"), 1);
    const PhasePoint x_end = parse_point(ctx.root.child("x_end"), 1);
    const std::vector<double> nus = ctx.root.number_list("nu_list");

    SweepPolicy policy;
    if (const auto pv = ctx.root.child_opt("policy")) {
        pv->allow_keys({"eps_coeff", "spacing_ratio", "bound_pad", "oracle_cutoff"});
        policy.eps_coeff = pv->number_or("eps_coeff", policy.eps_coeff);
        policy.spacing_ratio = pv->number_or("spacing_ratio", policy.spacing_ratio);
        policy.bound_pad = pv->number_or("bound_pad", policy.bound_pad);
        policy.oracle_cutoff =
            static_cast<int>(pv->integer_or("oracle_cutoff", policy.oracle_cutoff));
    }

    const ConvergenceTable table =
        run_nu_sweep(h, nus, T, x_end, x_start, policy, &ctx.warnings);
    write_sweep_csv(table, ctx.path("sweep.csv"), ctx.csv_comments());
    ctx.artifact("sweep.csv");

    for (const SweepRow& r : table.rows)
        ctx.value("nu " + format_g17(r.nu) + " relative error", r.rel_error);
    ctx.report["final_rel_error"] = table.final_rel_error();
    ctx.report["monotone_decreasing"] = table.monotone_decreasing();
    if (ctx.root.boolean_or("require_monotone", true))
        ctx.check(table.monotone_decreasing(), "relative error decreases along the sweep");
    if (ctx.root.has("max_final_error"))
        ctx.check(table.final_rel_error() <= ctx.root.number("max_final_error"),
                  "final relative error within bound");
    ctx.write_report("sweep_report.json");
}

void run_project(Ctx& ctx) {
    ctx.root.allow_keys(with_common({"space", "constraint", "group_points",
                                     "projector_tol", "oracle_tol", "n_random_taus"}));
    const FockSpace space = parse_space(ctx.root.child("space"));
    const ConstraintSet set = parse_constraint_set(ctx, space.dof());
    const long K = ctx.root.integer("group_points");
    const double tol = ctx.root.number_or("projector_tol", 1e-10);
    const double oracle_tol = ctx.root.number_or("oracle_tol", 1e-10);
    if (K < 1) ctx.root.fail("'group_points' must be positive");
    if (set.count() != 1)
        ctx.root.fail("'project' averages one compact constraint direction");

    const QuantumConstraintSet qset = quantize_constraints(space, set);
    const FockOperator Phi(space, Mat(qset.ops[0]));
    const ProjectorResult proj = build_projector(Phi, u1_quadrature(static_cast<int>(K)));

    ctx.report["group_points"] = proj.group_points;
    ctx.report["required_points"] = proj.required_points;
    ctx.report["idempotency_defect"] = proj.idempotency_defect;
    ctx.report["hermiticity_defect"] = proj.hermiticity_defect;
    ctx.report["max_integer_distance"] = proj.max_integer_distance;

    if (!proj.sufficient) {
        ctx.check(false, "group quadrature resolves the charge spectrum (need "
                         "group_points >= " +
                             std::to_string(proj.required_points) + ", got " +
                             std::to_string(proj.group_points) + ")");
        ctx.write_report("projector_report.json");
        return;
    }
    ctx.note("      group quadrature sufficient: " + std::to_string(proj.group_points) +
             " >= " + std::to_string(proj.required_points));

    const Mat oracle = zero_charge_projector(Phi);
    const double oracle_dev = low_block_max_abs(space, Mat(proj.E - oracle));
    ctx.report["oracle_deviation"] = oracle_dev;

    std::mt19937_64 rng(splitmix64(ctx.seed));
    const long n_taus = ctx.root.integer_or("n_random_taus", 3);
    const std::vector<double> taus =
        random_uniform(rng, static_cast<int>(n_taus), 0.0, 2.0 * kPi);
    const double shift_dev = shift_absorption_defect(Phi, proj.E, taus);
    ctx.report["shift_absorption_defect"] = shift_dev;
    ctx.report["taus"] = taus;

    ctx.value("idempotency defect", proj.idempotency_defect);
    ctx.value("hermiticity defect", proj.hermiticity_defect);
    ctx.value("eigenprojector oracle deviation", oracle_dev);
    ctx.value("shift absorption defect", shift_dev);
    ctx.check(proj.idempotency_defect <= tol, "E^2 = E on the low block");
    ctx.check(proj.hermiticity_defect <= tol, "E = E^dagger on the low block");
    ctx.check(oracle_dev <= oracle_tol, "E matches the eigenspace projector");
    ctx.check(shift_dev <= tol, "exp(i tau Phi) E = E for random tau");
    ctx.write_report("projector_report.json");
}

void run_gauge_check(Ctx& ctx) {
    ctx.root.allow_keys(with_common(
        {"space", "constraint", "h", "T", "group_points", "x_start", "x_end",
         "n_random_taus", "n_random_omegas", "flow_steps", "amplitude_tol",
         "fidelity_tol", "stochastic"}));
    const FockSpace space = parse_space(ctx.root.child("space"));
    const ConstraintSet set = parse_constraint_set(ctx, space.dof());
    const PolySymbol h = parse_symbol(ctx.root.child("h"), space.dof());
    const double T = ctx.root.number("T");
    const long K = ctx.root.integer("group_points");
    const PhasePoint x_start = parse_point(ctx.root.child("x_start"), space.dof());
    const PhasePoint x_end = parse_point(ctx.root.child("x_end"), space.dof());
    const double amplitude_tol = ctx.root.number_or("amplitude_tol", 1e-10);
    const double fidelity_tol = ctx.root.number_or("fidelity_tol", 1e-6);
    const int flow_steps = static_cast<int>(ctx.root.integer_or("flow_steps", 4096));
    if (set.count() != 1)
        ctx.root.fail("'gauge-check' drives one compact constraint direction");

    const QuantumConstraintSet qset = quantize_constraints(space, set);
    const FockOperator Phi(space, Mat(qset.ops[0]));
    const FockOperator H = anti_wick(space, h);
    const GroupQuadrature quad = u1_quadrature(static_cast<int>(K));
    const ProjectorResult proj = build_projector(Phi, quad);
    if (!proj.sufficient)
        ctx.root.fail("'group_points' below the spectral requirement " +
                      std::to_string(proj.required_points));

    const ProjectedPropagatorResult pp =
        projected_propagator(H, proj.E, T, x_end, x_start, 1e-8, {}, &ctx.warnings);
    ctx.report["projected_amplitude"] = complex_json(pp.value);
    ctx.report["form_disagreement"] = pp.form_disagreement;
    ctx.report["commutator_defect"] = pp.commutator_defect;
    ctx.value("projected amplitude re", pp.value.real());
    ctx.value("projected amplitude im", pp.value.imag());
    ctx.value("three-form disagreement", pp.form_disagreement);
    ctx.check(pp.form_disagreement <= amplitude_tol,
              "equivalent projected-propagator forms agree");

    // Multiplier independence: inserting exp(i tau Phi) must not move the
    // amplitude, because the projector absorbs every group shift.
    std::mt19937_64 rng(splitmix64(ctx.seed));
    const long n_taus = std::max<long>(3, ctx.root.integer_or("n_random_taus", 3));
    const std::vector<double> taus =
        random_uniform(rng, static_cast<int>(n_taus), 0.0, 2.0 * kPi);
    const SpectralPropagator prop(H);
    const StateVector start = coherent_state(space, x_start, {}, &ctx.warnings);
    const StateVector end = coherent_state(space, x_end, {}, &ctx.warnings);
    double tau_dev = 0.0;
    for (double tau : taus) {
        const Vec shifted = exp_i_hermitian(Phi.matrix(), tau) * (proj.E * start.vector());
        const cxd amp = end.vector().dot(prop.evolve(T, shifted));
        tau_dev = std::max(tau_dev, std::abs(amp - pp.value));
    }
    ctx.report["multiplier_independence_deviation"] = tau_dev;
    ctx.report["taus"] = taus;
    ctx.value("multiplier independence deviation", tau_dev);
    ctx.check(tau_dev <= amplitude_tol, "multiplier shifts leave the amplitude fixed");

    // Deterministic label average against the projected matrix element.
    const cxd averaged = label_average_propagator(H, set, quad, T, x_end, x_start,
                                                  flow_steps, {}, &ctx.warnings);
    const double avg_dev = std::abs(averaged - pp.value);
    ctx.report["label_average_deviation"] = avg_dev;
    ctx.value("label average deviation", avg_dev);
    ctx.check(avg_dev <= amplitude_tol, "label average equals the projected propagator");

    // Coherent transport along random finite gauge transformations.
    const long n_omegas = std::max<long>(1, ctx.root.integer_or("n_random_omegas", 2));
    double worst_fidelity = 1.0;
    double worst_phase = 0.0;
    for (long k = 0; k < n_omegas; ++k) {
        const double omega = random_uniform(rng, 1, 0.0, 2.0 * kPi)[0];
        const TransportResult tr =
            coherent_transport_check(qset, {omega}, x_start, flow_steps, {}, &ctx.warnings);
        worst_fidelity = std::min(worst_fidelity, tr.fidelity);
        worst_phase = std::max(worst_phase, std::abs(std::arg(tr.overlap)));
    }
    ctx.report["transport_worst_fidelity"] = worst_fidelity;
    ctx.report["transport_worst_phase"] = worst_phase;
    ctx.value("transport worst fidelity", worst_fidelity);
    ctx.value("transport worst phase", worst_phase);
    ctx.check(worst_fidelity >= 1.0 - fidelity_tol, "coherent transport fidelity");
    ctx.check(worst_phase <= fidelity_tol, "coherent transport carries no extra phase");

    // Optional stochastic multiplier-process average.
    if (const auto sv = ctx.root.child_opt("stochastic")) {
        sv->allow_keys({"n_samples", "gamma", "sigma_bound"});
        const long n_samples = sv->integer_or("n_samples", 10000);
        const double gamma = sv->number_or("gamma", 1.0);
        const double sigma_bound = sv->number_or("sigma_bound", 3.0);
        MultiplierMeasure measure;
        measure.gamma = gamma;
        const MultiplierAverageResult mc = multiplier_average_propagator(
            H, Phi, T, x_end, x_start, n_samples, ctx.seed, measure, 1e-8, {},
            &ctx.warnings);
        const double dev = std::abs(mc.mean - pp.value);
        ctx.report["stochastic"] = {{"mean", complex_json(mc.mean)},
                                    {"std_error", mc.std_error},
                                    {"deviation", dev},
                                    {"n_samples", mc.n_samples},
                                    {"period_multiplier", mc.period_multiplier},
                                    {"time_steps", mc.time_steps}};
        ctx.value("stochastic average deviation", dev);
        ctx.value("stochastic standard error", mc.std_error);
        ctx.check(dev <= sigma_bound * mc.std_error && !mc.unreliable,
                  "multiplier-process average within " + format_g17(sigma_bound) +
                      " standard errors");
    }
    ctx.write_report("gauge_report.json");
}

void run_classical_flow(Ctx& ctx) {
    ctx.root.allow_keys(with_common(
        {"dof", "constraint", "h", "x0", "T", "dt", "schedules", "record_stride",
         "observables", "drift_tol", "invariant_tol", "second_class_check"}));
    const int dof = static_cast<int>(ctx.root.integer("dof"));
    if (dof < 1) ctx.root.fail("'dof' must be positive");
    const ConstraintSet set = parse_constraint_set(ctx, dof);
    const PolySymbol h = parse_symbol(ctx.root.child("h"), dof);
    const PhasePoint x0 = parse_point(ctx.root.child("x0"), dof);
    const double T = ctx.root.number("T");
    const double dt = ctx.root.number("dt");
    const long n_schedules = ctx.root.integer_or("schedules", 3);
    const int stride = static_cast<int>(ctx.root.integer_or("record_stride", 100));
    const double drift_tol = ctx.root.number_or("drift_tol", 1e-8);
    const double invariant_tol = ctx.root.number_or("invariant_tol", 1e-6);
    if (!(T > 0.0) || !(dt > 0.0)) ctx.root.fail("'T' and 'dt' must be positive");
    if (n_schedules < 1) ctx.root.fail("'schedules' must be positive");

    const ClassificationReport cls = classify_constraints(set, h);
    ctx.report["first_class"] = cls.first_class();
    ctx.check(cls.first_class(), "constraint set is first class against h");

    // Gauge-invariant observables evaluated at the final point: the energy,
    // every constraint, plus any configured extras (they must commute with the
    // constraints for cross-schedule agreement to be meaningful).
    std::vector<std::pair<std::string, PolySymbol>> observables;
    observables.emplace_back("h", h);
    for (int a = 0; a < set.count(); ++a)
        observables.emplace_back("phi_" + std::to_string(a), set.phis[a]);
    if (const auto ov = ctx.root.child_opt("observables")) {
        if (!ov->raw().is_array()) ov->fail("expected an array of symbols");
        long index = 0;
        for (const auto& item : ov->raw()) {
            const ConfigView one(item, ov->path() + "/" + std::to_string(index));
            observables.emplace_back("observable_" + std::to_string(index),
                                     parse_symbol(one, dof));
            ++index;
        }
    }

    std::vector<std::vector<double>> finals(n_schedules);
    std::vector<double> gauge_variant_finals;
    double worst_drift = 0.0;
    for (long k = 0; k < n_schedules; ++k) {
        // Smooth random multiplier schedule: offset plus two incommensurate
        // sinusoids, coefficients drawn from the per-schedule seed.
        std::mt19937_64 rng(splitmix64(ctx.seed ^ static_cast<std::uint64_t>(k)));
        std::vector<MultiplierSchedule> lambdas;
        for (int a = 0; a < set.count(); ++a) {
            const std::vector<double> c = random_uniform(rng, 3, -1.0, 1.0);
            const std::vector<double> om = random_uniform(rng, 2, 0.5, 3.0);
            const std::vector<double> ph = random_uniform(rng, 2, 0.0, 2.0 * kPi);
            lambdas.push_back([c, om, ph](double t) {
                return c[0] + c[1] * std::sin(om[0] * t + ph[0]) +
                       c[2] * std::sin(om[1] * t + ph[1]);
            });
        }
        FlowOptions opt;
        opt.record_stride = stride;
        const Trajectory traj = constrained_flow(h, set, x0, lambdas, T, dt, opt);
        const std::string name = "trajectory_" + std::to_string(k) + ".csv";
        write_trajectory_csv(traj, ctx.path(name), "config_hash=" + ctx.hash);
        ctx.artifact(name);

        double drift = 0.0;
        for (const auto& node : traj.constraint_values)
            for (double v : node) drift = std::max(drift, std::abs(v));
        worst_drift = std::max(worst_drift, drift);

        const PhasePoint& xT = traj.points.back();
        for (const auto& [obs_name, obs] : observables) finals[k].push_back(obs.evaluate(xT));
        gauge_variant_finals.push_back(xT.q[0]);
    }
    ctx.report["on_surface_drift"] = worst_drift;
    ctx.value("on-surface drift", worst_drift);
    ctx.check(worst_drift <= drift_tol, "constraints stay on the surface");

    double invariant_spread = 0.0;
    nlohmann::json obs_json = nlohmann::json::object();
    for (std::size_t i = 0; i < observables.size(); ++i) {
        double lo = finals[0][i], hi = finals[0][i];
        for (long k = 1; k < n_schedules; ++k) {
            lo = std::min(lo, finals[k][i]);
            hi = std::max(hi, finals[k][i]);
        }
        obs_json[observables[i].first] = {{"value", finals[0][i]}, {"spread", hi - lo}};
        invariant_spread = std::max(invariant_spread, hi - lo);
    }
    ctx.report["observables"] = obs_json;
    ctx.value("invariant spread across schedules", invariant_spread);
    ctx.check(invariant_spread <= invariant_tol,
              "gauge-invariant observables agree across multiplier schedules");

    // The gauge-variant coordinate must actually move, otherwise the
    // invariance statement above is vacuous.
    double variant_spread = 0.0;
    for (double v : gauge_variant_finals)
        variant_spread =
            std::max(variant_spread, std::abs(v - gauge_variant_finals.front()));
    ctx.report["gauge_variant_spread"] = variant_spread;
    ctx.value("gauge-variant coordinate spread", variant_spread);
    if (n_schedules > 1)
        ctx.check(variant_spread > invariant_tol,
                  "multiplier schedules produce distinct gauge orbits");

    if (ctx.root.boolean_or("second_class_check", true)) {
        ConstraintSet second;
        second.dof = dof;
        second.phis = {PolySymbol::position(dof, 0), PolySymbol::momentum(dof, 0)};
        const ClassificationReport rep = classify_constraints(second, h);
        ctx.report["second_class_detected"] = !rep.first_class();
        ctx.check(!rep.first_class(), "second-class pair (q^1, p_1) is detected");
    }
    ctx.write_report("flow_report.json");
}

void run_stochastic_check(Ctx& ctx) {
    ctx.root.allow_keys(with_common(
        {"nu", "T", "steps", "x_start", "x_end", "n_paths", "telescoping_tol",
         "chain_rule", "ito_strat"}));
    const double nu = ctx.root.number("nu");
    const double T = ctx.root.number("T");
    const int steps = static_cast<int>(ctx.root.integer("steps"));
    const PhasePoint x_start = parse_point(ctx.root.child("x_start"), 1);
    const PhasePoint x_end = parse_point(ctx.root.child("x_end"), 1);
    const long n_paths = ctx.root.integer_or("n_paths", 100);
    const double tele_tol = ctx.root.number_or("telescoping_tol", 1e-12);

    // Discrete Leibniz identity: midpoint p dq plus midpoint q dp telescopes
    // to the endpoint difference of pq exactly, path by path.
    double tele_worst = 0.0;
    for (long i = 0; i < n_paths; ++i) {
        const BrownianPath path = sample_bridge(
            nu, T, steps, x_start, x_end, splitmix64(ctx.seed ^ static_cast<std::uint64_t>(i)));
        const double lhs = strat_integral(path) + strat_integral_qdp(path);
        const double rhs = path.p(steps) * path.q(steps) - path.p(0) * path.q(0);
        tele_worst = std::max(tele_worst, std::abs(lhs - rhs));
    }
    ctx.report["telescoping_worst"] = tele_worst;
    ctx.value("telescoping worst residual", tele_worst);
    ctx.check(tele_worst <= tele_tol, "discrete Leibniz identity telescopes exactly");

    // Sample path artifact for plotting.
    const BrownianPath sample =
        sample_bridge(nu, T, steps, x_start, x_end, splitmix64(ctx.seed));
    write_path_csv(sample, ctx.path("sample_path.csv"));
    ctx.artifact("sample_path.csv");

    // Chain-rule residual through the action-angle chart: the median residual
    // halves when the resolution doubles (order-1/2 strong convergence).
    {
        const ConfigView cv = ctx.root.has("chain_rule")
                                  ? ctx.root.child("chain_rule")
                                  : ConfigView(kEmptySection, "/chain_rule");
        cv.allow_keys({"ladder", "seeds", "ratio_band"});
        std::vector<long> ladder = {64, 128, 256};
        if (cv.has("ladder")) ladder = cv.integer_list("ladder");
        const long n_seeds = cv.integer_or("seeds", 100);
        std::vector<double> band = {0.35, 0.65};
        if (cv.has("ratio_band")) band = cv.number_list("ratio_band");

        std::ostringstream csv;
        for (const std::string& c : ctx.csv_comments()) csv << "# " << c << '\n';
        csv << "steps,median_residual\n";
        std::vector<double> medians;
        for (long L : ladder) {
            std::vector<double> residuals;
            for (long i = 0; i < n_seeds; ++i) {
                const BrownianPath path =
                    sample_bridge(nu, T, static_cast<int>(L), x_start, x_end,
                                  splitmix64(ctx.seed ^ (0x1000 + static_cast<std::uint64_t>(i))));
                residuals.push_back(chain_rule_residual(path));
            }
            std::sort(residuals.begin(), residuals.end());
            const double median = residuals[residuals.size() / 2];
            medians.push_back(median);
            csv << L << ',' << format_g17(median) << '\n';
            ctx.value("chain-rule median residual at L=" + std::to_string(L), median);
        }
        write_text_file(ctx.path("chain_rule.csv"), csv.str());
        ctx.artifact("chain_rule.csv");

        bool halves = medians.size() >= 2;
        for (std::size_t i = 1; i < medians.size(); ++i) {
            const double ratio = medians[i] / medians[i - 1];
            if (!(ratio >= band[0] && ratio <= band[1])) halves = false;
        }
        ctx.report["chain_rule_medians"] = medians;
        ctx.check(halves, "chain-rule median residual halves when L doubles");
    }

    // Ito vs Stratonovich: the discretization gap (1/2)Sum (p_{l+1}-p_l)(q_{l+1}-q_l).
    // The p and q bridge components are independent, so each term has expectation
    // E[dp]E[dq] = (dp_total/L)(dq_total/L); summing over L steps gives the exact
    // pinning bias dp_total*dq_total/(2L), which vanishes only when the endpoints
    // displace in at most one coordinate.
    {
        const ConfigView iv = ctx.root.has("ito_strat")
                                  ? ctx.root.child("ito_strat")
                                  : ConfigView(kEmptySection, "/ito_strat");
        iv.allow_keys({"n_paths", "sigma_bound"});
        const long n = iv.integer_or("n_paths", 10000);
        const double sigma_bound = iv.number_or("sigma_bound", 4.0);
        const double predicted = (x_end.p[0] - x_start.p[0]) * (x_end.q[0] - x_start.q[0]) /
                                 (2.0 * static_cast<double>(steps));
        double sum = 0.0, sum2 = 0.0;
        for (long i = 0; i < n; ++i) {
            const BrownianPath path =
                sample_bridge(nu, T, steps, x_start, x_end,
                              splitmix64(ctx.seed ^ (0x2000 + static_cast<std::uint64_t>(i))));
            const double d = strat_integral(path) - ito_integral(path);
            sum += d;
            sum2 += d * d;
        }
        const double mean = sum / static_cast<double>(n);
        const double var =
            (sum2 - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1);
        const double se = std::sqrt(var / static_cast<double>(n));
        const double z = std::abs(mean - predicted) / se;
        ctx.report["ito_strat"] = {
            {"mean", mean}, {"predicted_mean", predicted}, {"std_error", se}, {"z", z}};
        ctx.value("ito-strat mean difference", mean);
        ctx.value("ito-strat predicted mean", predicted);
        ctx.value("ito-strat z-score", z);
        ctx.check(z <= sigma_bound, "ito-strat mean difference matches the pinning prediction");
    }
    ctx.write_report("stochastic_report.json");
}

}  // namespace

RunResult run_experiment(const nlohmann::json& config, const std::string& out_dir) {
    Ctx ctx{ConfigView(config, ""), out_dir};
    if (!config.is_object())
        throw ConfigError("config error at '/': expected a top-level object");
    if (!ctx.root.has("experiment"))
        throw ConfigError("config error at '/': missing required field 'experiment'");
    const std::string name = ctx.root.string("experiment");
    ctx.seed = ctx.root.uint64_or("seed", 2024);
    ctx.workers = static_cast<int>(ctx.root.integer_or("workers", 1));
    if (ctx.workers < 1) ctx.root.fail("'workers' must be at least 1");
    ctx.hash = fingerprint_hex(config_fingerprint(config));

    std::filesystem::create_directories(out_dir);
    ctx.manifest.experiment = name;
    ctx.manifest.config_hash = ctx.hash;
    ctx.manifest.seed = ctx.seed;
    ctx.manifest.workers = ctx.workers;

    if (name == "quantize")
        run_quantize(ctx);
    else if (name == "resolution")
        run_resolution(ctx);
    else if (name == "propagate")
        run_propagate(ctx);
    else if (name == "nu-sweep")
        run_sweep_experiment(ctx);
    else if (name == "project")
        run_project(ctx);
    else if (name == "gauge-check")
        run_gauge_check(ctx);
    else if (name == "classical-flow")
        run_classical_flow(ctx);
    else if (name == "stochastic-check")
        run_stochastic_check(ctx);
    else
        throw ConfigError(
            "config error at '/experiment': unknown experiment '" + name +
            "' (known: quantize, resolution, propagate, nu-sweep, project, "
            "gauge-check, classical-flow, stochastic-check)");

    ctx.manifest.warnings = ctx.warnings.messages;
    write_manifest(ctx.manifest, config, out_dir);
    return ctx.result;
}

}  // namespace cfq
