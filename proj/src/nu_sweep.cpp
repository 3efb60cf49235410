#include "cfq/nu_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfq/fock_space.hpp"
#include "cfq/matrix_io.hpp"
#include "cfq/propagator.hpp"
#include "cfq/quantizer.hpp"

namespace cfq {

bool ConvergenceTable::monotone_decreasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].rel_error < rows[i - 1].rel_error)) return false;
    return true;
}

double ConvergenceTable::final_rel_error() const {
    if (rows.empty()) throw DomainError("ConvergenceTable: empty sweep");
    return rows.back().rel_error;
}

ConvergenceTable run_nu_sweep(const PolySymbol& h, const std::vector<double>& nus,
                              double T, const PhasePoint& x_end,
                              const PhasePoint& x_start, const SweepPolicy& policy,
                              Warnings* warnings) {
    if (h.dof() != 1 || x_end.dof() != 1 || x_start.dof() != 1)
        throw DimensionError("run_nu_sweep: lattice composition is single-mode");
    if (nus.empty()) throw DomainError("run_nu_sweep: no diffusion constants given");
    if (!(T > 0.0)) throw DomainError("run_nu_sweep: T must be positive");

    const FockSpace space = build_space(policy.oracle_cutoff, 1);
    const FockOperator H = anti_wick(space, h);
    const cxd oracle =
        exact_propagator(H, T, x_end, x_start, FockTolerances{}, warnings);

    const double reach =
        std::max({std::abs(x_end.p[0]), std::abs(x_end.q[0]), std::abs(x_start.p[0]),
                  std::abs(x_start.q[0])});
    const double bound = reach + policy.bound_pad;

    ConvergenceTable table;
    for (double nu : nus) {
        if (!(nu > 0.0)) throw DomainError("run_nu_sweep: nu must be positive");
        SweepRow row;
        row.nu = nu;
        row.steps = std::max(2, static_cast<int>(std::lround(T * nu / policy.eps_coeff)));
        row.eps = T / row.steps;
        const double sigma = std::sqrt(nu * row.eps);
        row.points =
            static_cast<int>(std::ceil(2.0 * bound / (policy.spacing_ratio * sigma))) + 1;
        GridSpec grid;
        grid.pmin = grid.qmin = -bound;
        grid.pmax = grid.qmax = bound;
        grid.np = grid.nq = row.points;
        row.spacing = grid.dp();
        const LatticeAmplitude amp = compose_calibrated(
            h, nu, row.eps, row.steps, grid, x_end, x_start, policy.lattice, warnings);
        row.estimate = amp.calibrated;
        row.oracle = oracle;
        row.rel_error = std::abs(row.estimate - oracle) / std::abs(oracle);
        table.rows.push_back(row);
    }
    return table;
}

void write_sweep_csv(const ConvergenceTable& table, const std::string& filename,
                     const std::vector<std::string>& comments) {
    std::ostringstream out;
    for (const std::string& c : comments) out << "# " << c << '\n';
    out << "nu,eps,steps,points,spacing,estimate_re,estimate_im,oracle_re,oracle_im,"
           "rel_error\n";
    for (const SweepRow& r : table.rows) {
        out << format_g17(r.nu) << ',' << format_g17(r.eps) << ',' << r.steps << ','
            << r.points << ',' << format_g17(r.spacing) << ','
            << format_g17(r.estimate.real()) << ',' << format_g17(r.estimate.imag())
            << ',' << format_g17(r.oracle.real()) << ',' << format_g17(r.oracle.imag())
            << ',' << format_g17(r.rel_error) << '\n';
    }
    write_text_file(filename, out.str());
}

}  // namespace cfq
