#include "cfq/lattice.hpp"

#include <cmath>
#include <vector>

#include "cfq/propagator.hpp"

namespace cfq {

namespace {

struct BilinearPin {
    long idx[4];
    double w[4];
};

// Weights of the four surrounding lattice points for point (p, q).
BilinearPin bilinear_weights(const GridSpec& g, double p, double q) {
    const double fp = (p - g.pmin) / g.dp();
    const double fq = (q - g.qmin) / g.dq();
    int ip = static_cast<int>(std::floor(fp));
    int iq = static_cast<int>(std::floor(fq));
    ip = std::max(0, std::min(g.np - 2, ip));
    iq = std::max(0, std::min(g.nq - 2, iq));
    const double ap = fp - ip, aq = fq - iq;
    BilinearPin pin;
    const auto at = [&](int i, int j) { return static_cast<long>(i) * g.nq + j; };
    pin.idx[0] = at(ip, iq);
    pin.w[0] = (1 - ap) * (1 - aq);
    pin.idx[1] = at(ip + 1, iq);
    pin.w[1] = ap * (1 - aq);
    pin.idx[2] = at(ip, iq + 1);
    pin.w[2] = (1 - ap) * aq;
    pin.idx[3] = at(ip + 1, iq + 1);
    pin.w[3] = ap * aq;
    return pin;
}

}  // namespace

LatticeKernel::LatticeKernel(const PolySymbol& h, double nu, double eps,
                             const GridSpec& grid, const LatticeOptions& opt,
                             Warnings* warnings)
    : grid_(grid),
      nu_(nu),
      eps_(eps),
      endpoint_margin_(opt.endpoint_margin_sigmas * std::sqrt(nu * eps)) {
    if (h.dof() != 1)
        throw DimensionError("LatticeKernel: grid composition is single-mode");
    if (!(nu > 0.0) || !(eps > 0.0))
        throw DomainError("LatticeKernel: nu and eps must be positive");
    if (grid.np < 4 || grid.nq < 4) throw ConfigError("LatticeKernel: grid too small");

    const double sigma = std::sqrt(nu * eps);
    const double spacing = std::max(grid.dp(), grid.dq());
    if (spacing > opt.hard_spacing_ratio * sigma)
        throw ConfigError("LatticeKernel: grid spacing " + std::to_string(spacing) +
                          " exceeds sqrt(nu*eps) = " + std::to_string(sigma) +
                          "; refine the grid or enlarge eps");
    if (spacing > opt.warn_spacing_ratio * sigma)
        warn(warnings, "LatticeKernel: grid spacing above " +
                           std::to_string(opt.warn_spacing_ratio) +
                           "*sqrt(nu*eps); one-step Gaussian is marginally resolved");

    const double band = opt.band_sigmas * sigma;
    const int bp = std::min(grid.np - 1, static_cast<int>(std::floor(band / grid.dp())));
    const int bq = std::min(grid.nq - 1, static_cast<int>(std::floor(band / grid.dq())));

    // Displacement-only table: cellarea * gaussian(d) * exp(-i d_p d_q / 2)
    // (the midpoint phase (p_y - d_p/2) d_q splits into p_y d_q and -d_p d_q/2).
    // The pre-point variant uses (p_y - d_p) d_q and h at the pre-point.
    const double gauss_norm = grid.cell_area() / (2.0 * kPi * nu * eps);
    const double dfactor = opt.pre_point_phase ? 1.0 : 0.5;
    Eigen::MatrixXcd dtab(2 * bp + 1, 2 * bq + 1);
    for (int mp = -bp; mp <= bp; ++mp) {
        const double dp = mp * grid.dp();
        for (int mq = -bq; mq <= bq; ++mq) {
            const double dq = mq * grid.dq();
            const double r2 = dp * dp + dq * dq;
            if (r2 > band * band) {
                dtab(mp + bp, mq + bq) = 0.0;
                continue;
            }
            dtab(mp + bp, mq + bq) = gauss_norm * std::exp(-r2 / (2.0 * nu * eps)) *
                                     std::exp(cxd(0.0, -dfactor * dp * dq));
        }
    }

    // exp(i p_y d_q) per (row momentum index, displacement column index)
    Eigen::MatrixXcd ptab(grid.np, 2 * bq + 1);
    for (int ip = 0; ip < grid.np; ++ip) {
        const double py = grid.pmin + ip * grid.dp();
        for (int mq = -bq; mq <= bq; ++mq)
            ptab(ip, mq + bq) = std::exp(cxd(0.0, py * mq * grid.dq()));
    }

    // exp(-i h(.) eps) on the half-spacing grid (midpoints live there).
    const int hp = 2 * grid.np - 1, hq = 2 * grid.nq - 1;
    Eigen::MatrixXcd htab(hp, hq);
    const bool h_zero = h.is_zero();
    if (!h_zero) {
        PhasePoint mid({0.0}, {0.0});
        for (int i = 0; i < hp; ++i) {
            mid.p[0] = grid.pmin + 0.5 * i * grid.dp();
            for (int j = 0; j < hq; ++j) {
                mid.q[0] = grid.qmin + 0.5 * j * grid.dq();
                htab(i, j) = std::exp(cxd(0.0, -h.evaluate(mid) * eps));
            }
        }
    }

    std::vector<Eigen::Triplet<cxd>> triplets;
    triplets.reserve(static_cast<std::size_t>(grid.size()) * (2 * bp + 1) * (2 * bq + 1) / 2);
    for (int ip = 0; ip < grid.np; ++ip) {
        for (int iq = 0; iq < grid.nq; ++iq) {
            const long row = static_cast<long>(ip) * grid.nq + iq;
            for (int mp = -bp; mp <= bp; ++mp) {
                const int sp = ip - mp;
                if (sp < 0 || sp >= grid.np) continue;
                for (int mq = -bq; mq <= bq; ++mq) {
                    const int sq = iq - mq;
                    if (sq < 0 || sq >= grid.nq) continue;
                    cxd w = dtab(mp + bp, mq + bq);
                    if (w == cxd(0.0)) continue;
                    w *= ptab(ip, mq + bq);
                    if (!h_zero) {
                        // midpoint indices on the half grid: y - d/2; the
                        // pre-point variant evaluates h at the source x = y - d.
                        const int hi = opt.pre_point_phase ? 2 * sp : 2 * ip - mp;
                        const int hj = opt.pre_point_phase ? 2 * sq : 2 * iq - mq;
                        w *= htab(hi, hj);
                    }
                    const long col = static_cast<long>(sp) * grid.nq + sq;
                    triplets.emplace_back(row, col, w);
                }
            }
        }
    }
    W_.resize(grid.size(), grid.size());
    W_.setFromTriplets(triplets.begin(), triplets.end());
    W_.makeCompressed();
}

cxd compose_raw(const LatticeKernel& kernel, int L, const PhasePoint& x_end,
                const PhasePoint& x_start, bool apply_prefactor) {
    if (L < 1) throw DomainError("compose_raw: need at least one step");
    if (x_end.dof() != 1 || x_start.dof() != 1)
        throw DimensionError("compose_raw: single-mode endpoints required");
    const GridSpec& g = kernel.grid();
    const double margin = kernel.endpoint_margin();
    if (!g.contains(x_start.p[0], x_start.q[0], margin) ||
        !g.contains(x_end.p[0], x_end.q[0], margin))
        throw ConfigError(
            "compose_raw: endpoint too close to the grid edge (needs margin " +
            std::to_string(margin) + ")");

    const BilinearPin start = bilinear_weights(g, x_start.p[0], x_start.q[0]);
    Vec v = Vec::Zero(g.size());
    for (int k = 0; k < 4; ++k) v(start.idx[k]) += start.w[k] / g.cell_area();
    for (int l = 0; l < L; ++l) v = kernel.step(v);
    const BilinearPin end = bilinear_weights(g, x_end.p[0], x_end.q[0]);
    cxd out = 0.0;
    for (int k = 0; k < 4; ++k) out += end.w[k] * v(end.idx[k]);
    if (apply_prefactor) {
        const double T = L * kernel.eps();
        out *= 2.0 * kPi * std::exp(0.5 * kernel.nu() * T);
    }
    return out;
}

LatticeAmplitude compose_calibrated(const PolySymbol& h, double nu, double eps, int L,
                                    const GridSpec& grid, const PhasePoint& x_end,
                                    const PhasePoint& x_start, const LatticeOptions& opt,
                                    Warnings* warnings) {
    LatticeAmplitude amp;
    {
        const LatticeKernel kernel(h, nu, eps, grid, opt, warnings);
        amp.raw = compose_raw(kernel, L, x_end, x_start);
    }
    {
        const PolySymbol zero(1);
        const LatticeKernel free_kernel(zero, nu, eps, grid, opt, nullptr);
        amp.h0_diagonal = compose_raw(free_kernel, L, x_start, x_start);
    }
    amp.calibrated = amp.raw / amp.h0_diagonal;
    return amp;
}

cxd free_regularized_reference(double nu, double T, const PhasePoint& x_end,
                               const PhasePoint& x_start) {
    if (x_end.dof() != x_start.dof())
        throw DimensionError("free_regularized_reference: dof mismatch");
    const double nt = nu * T;
    double delta2 = 0.0;
    for (int j = 0; j < x_end.dof(); ++j) {
        const double dp = x_end.p[j] - x_start.p[j];
        const double dq = x_end.q[j] - x_start.q[j];
        delta2 += dp * dp + dq * dq;
    }
    const double mass = 1.0 / (1.0 - std::exp(-nt));
    const double width = std::exp(-0.25 * (1.0 / std::tanh(0.5 * nt) - 1.0) * delta2);
    const double per_mode = std::pow(mass, x_end.dof());
    return per_mode * width * coherent_overlap_closed_form(x_end, x_start);
}

}  // namespace cfq
