#include "tilab/plan.hpp"

#include <cmath>

namespace tilab {

std::vector<PairConfig> FrequencyPlan::configs() const {
    std::vector<PairConfig> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.config);
    return out;
}

std::size_t FrequencyPlan::usable_nodes() const {
    std::size_t n = 0;
    for (const auto& nd : nodes) n += nd.usable ? 1 : 0;
    return n;
}

FrequencyPlan plan_frequencies(const PlanOptions& opt, const IsotropicBackground& medium) {
    if (opt.freq_n < 8) throw std::invalid_argument("plan: frequency lattice needs n >= 8");
    if (!opt.omegas.empty() && opt.omegas.size() != 2)
        throw std::invalid_argument("plan: omegas must be empty or exactly two values");
    if (opt.omegas.size() == 2) {
        if (!(opt.omegas[0] > 0.0) || !(opt.omegas[1] > 0.0) || opt.omegas[0] == opt.omegas[1])
            throw std::invalid_argument("plan: the two frequencies must be positive and distinct");
    }
    if (opt.r_sweep.empty()) throw std::invalid_argument("plan: empty r sweep");

    FrequencyPlan plan;
    plan.geo.h = opt.freq_n / 2 - 1;  // the unpaired lattice plane is dropped
    plan.geo.length = opt.box_length;
    plan.medium = medium;
    plan.omegas = opt.omegas;
    plan.r_base = opt.r_sweep;
    plan.s_min = opt.s_min_spacings * plan.geo.dxi() * 0.5;

    const int h = plan.geo.h;
    const double dxi = plan.geo.dxi();

    // Largest shear wavenumber any entry must clear.
    double ks2_max = 0.0;
    for (double w : plan.omegas) ks2_max = std::max(ks2_max, medium.at_omega(w).ks2());

    // Oscillation budget: the pair frequency magnitude equals |xi|.
    const double kappa_peak = dxi * h * std::sqrt(3.0) * 1.01;
    if (kappa_peak > opt.kappa_max)
        throw std::invalid_argument("plan: lattice frequencies exceed kappa_max");
    const double w_max = opt.box_length * 0.5;
    if (oscillation_points(kappa_peak, w_max, opt.quad_base_points) > opt.quad_max_points)
        throw std::invalid_argument(
            "plan: lattice frequencies would exceed the quadrature oscillation cap");

    // Retained conjugate half: nu3 > 0, or nu3 = 0 and nu1 > 0, or
    // nu3 = nu1 = 0 and nu2 > 0. The origin is masked (no pair reaches it).
    for (int a = -h; a <= h; ++a)
        for (int b = -h; b <= h; ++b)
            for (int c = -h; c <= h; ++c) {
                const bool retained =
                    (c > 0) || (c == 0 && a > 0) || (c == 0 && a == 0 && b > 0) ||
                    (a == 0 && b == 0 && c == 0);
                if (!retained) continue;
                PlanNode node;
                node.nu = {a, b, c};
                const Vec3 xi = plan.geo.xi(a, b, c);
                const double sperp = 0.5 * std::hypot(xi(0), xi(1));
                node.s = sperp;
                node.t = 0.5 * xi(2);
                node.phi = (sperp > 0.0) ? std::atan2(xi(1), xi(0)) : 0.0;
                node.d2 = node.s * node.s + node.t * node.t;
                if (node.d2 == 0.0) {
                    node.usable = false;
                    node.mask_reason = "degenerate-origin";
                } else if (ks2_max > 0.0 && node.d2 <= ks2_max * (1.0 + opt.evanescent_margin)) {
                    node.usable = false;
                    node.mask_reason = "evanescent";
                }
                if (node.usable && node.s < plan.s_min) {
                    node.step4_singular = true;
                    node.mask_reason = "step4-singular";
                }
                plan.nodes.push_back(node);
            }

    auto add = [&plan](int node, PairKind kind, int iw, int ir, double omega, double r) {
        PlanEntry e;
        e.node = node;
        e.kind = kind;
        e.iw = iw;
        e.ir = ir;
        e.config = {kind, plan.nodes[node].s, plan.nodes[node].t, plan.nodes[node].phi, r, omega};
        plan.entries.push_back(e);
    };

    const int nr = static_cast<int>(plan.r_base.size());
    for (int ni = 0; ni < static_cast<int>(plan.nodes.size()); ++ni) {
        const PlanNode& nd = plan.nodes[ni];
        if (!nd.usable) continue;
        if (plan.omegas.empty()) {
            add(ni, PairKind::A_shear, -1, -1, 0.0, 0.0);
            add(ni, PairKind::B_gradient, -1, -1, 0.0, 0.0);  // degenerate r = 0 pair
            for (int ir = 0; ir < nr; ++ir)
                add(ni, PairKind::B_gradient, -1, ir, 0.0, plan.r_at(nd, ir));
            if (!nd.step4_singular)
                for (int ir = 0; ir < nr; ++ir)
                    add(ni, PairKind::C_affine_right, -1, ir, 0.0, plan.r_at(nd, ir));
            add(ni, PairKind::D_affine_both, -1, -1, 0.0, 0.0);
        } else {
            for (int iw = 0; iw < 2; ++iw) {
                const double w = plan.omegas[iw];
                add(ni, PairKind::A_shear, iw, -1, w, 0.0);
                add(ni, PairKind::B_gradient, iw, -1, w, 0.0);  // degenerate r = 0 pair
                for (int ir = 0; ir < nr; ++ir)
                    add(ni, PairKind::B_gradient, iw, ir, w, plan.r_at(nd, ir));
                add(ni, PairKind::E_theta, iw, -1, w, 0.0);
            }
            if (!nd.step4_singular)
                for (int ir = 0; ir < nr; ++ir)
                    add(ni, PairKind::F_grad_theta, 0, ir, plan.omegas[0], plan.r_at(nd, ir));
        }
    }

    if (plan.usable_nodes() == 0) throw std::invalid_argument("plan: no usable frequency nodes");
    return plan;
}

}  // namespace tilab
