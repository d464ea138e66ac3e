#include "tilab/recon.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace tilab {

namespace {

const std::array<StiffnessTensor, 5>& var_basis() {
    static const std::array<StiffnessTensor, 5> basis = [] {
        std::array<StiffnessTensor, 5> out;
        for (int c = 0; c < 5; ++c) {
            std::array<double, 5> a{};
            a[c] = 1.0;
            out[c] = ti_expand(TIComponents::from_array(a));
        }
        return out;
    }();
    return basis;
}

// Component -> variable matrix: component_c = sum_v M[c][v] * var_v, with
// rows (c1111, c1122, c1133, c1313, c3333) and columns (y1, y2, y3, z1, z2).
constexpr double kCompToVar[5][5] = {
    {0.0, 0.0, 0.0, 0.0, 1.0},
    {-2.0, 0.25, -0.25, 0.0, 1.0},
    {0.0, 0.0, 0.0, 1.0, 1.0},
    {0.0, 0.125, -0.125, 0.0, 0.0},
    {0.0, 0.5, 0.5, 2.0, 1.0},
};

VarCoeffs slot_coeffs(const CMat3& g, const CMat3& h, const CVec3& au, const CVec3& av,
                      double omega) {
    VarCoeffs out{};
    std::array<Complex, 5> comp;
    for (int c = 0; c < 5; ++c) comp[c] = contract(var_basis()[c], g, h);
    for (int v = 0; v < 5; ++v) {
        Complex acc(0.0, 0.0);
        for (int c = 0; c < 5; ++c) acc += comp[c] * kCompToVar[c][v];
        out[v] = acc;
    }
    const double w2 = omega * omega;
    out[VR11] = -w2 * (au(0) * av(0) + au(1) * av(1));
    out[VR33] = -w2 * au(2) * av(2);
    return out;
}

}  // namespace

SlotCoeffs pair_var_coefficients(const PairFactors& f) {
    SlotCoeffs s;
    s.eu = f.eu;
    s.ev = f.ev;
    s.m00 = slot_coeffs(f.g[0], f.h[0], f.au[0], f.av[0], f.omega);
    if (f.u_affine) {
        s.m10 = slot_coeffs(f.g[1], f.h[0], f.au[1], f.av[0], f.omega);
        s.has10 = true;
    }
    if (f.v_affine) {
        s.m01 = slot_coeffs(f.g[0], f.h[1], f.au[0], f.av[1], f.omega);
        s.has01 = true;
    }
    if (f.u_affine && f.v_affine) {
        s.m11 = slot_coeffs(f.g[1], f.h[1], f.au[1], f.av[1], f.omega);
        s.has11 = true;
    }
    return s;
}

PolyFit fit_r_powers(const std::vector<double>& rs, const std::vector<Complex>& vals) {
    if (rs.size() != vals.size() || rs.size() < 5)
        throw std::invalid_argument("fit_r_powers: need at least 5 samples");
    const double rmax = *std::max_element(rs.begin(), rs.end());
    Eigen::MatrixXd a(rs.size(), 5);
    Eigen::VectorXcd b(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double u = rs[i] / rmax;
        double p = 1.0;
        for (int k = 0; k < 5; ++k) {
            a(i, k) = p;
            p *= u;
        }
        b(i) = vals[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    PolyFit out;
    out.condition = svd.singularValues()(0) / svd.singularValues()(4);
    const Eigen::VectorXd xr = svd.solve(Eigen::VectorXd(b.real()));
    const Eigen::VectorXd xi = svd.solve(Eigen::VectorXd(b.imag()));
    double scale = 1.0;
    for (int k = 0; k < 5; ++k) {
        out.coef[k] = Complex(xr(k), xi(k)) / scale;
        scale *= rmax;
    }
    return out;
}

namespace {

struct NodeEntries {
    std::array<int, 2> a_entry = {-1, -1};
    std::array<int, 2> b0_entry = {-1, -1};
    std::array<std::vector<int>, 2> b_sweep;
    std::vector<int> c_sweep;
    int d_entry = -1;
    std::array<int, 2> e_entry = {-1, -1};
    std::vector<int> f_sweep;
};

struct NodeExtract {
    Complex y1{}, y2{}, y3{}, y4{}, a_part{};
    Complex y3_raw_diff{}, y3_raw_avg{};
    bool ok = true;
    bool y4_valid = false;
    double condition = 0.0;
    std::string error;
};

Complex at_neg(const FreqGrid& g, const std::array<int, 3>& nu) {
    return g.at(-nu[0], -nu[1], -nu[2]);
}

void put_value(FreqGrid& g, const std::array<int, 3>& nu, Complex value_at_minus_xi) {
    g.at(-nu[0], -nu[1], -nu[2]) = value_at_minus_xi;
    g.at(nu[0], nu[1], nu[2]) = std::conj(value_at_minus_xi);
}

void put_mask(FreqGrid& g, const std::array<int, 3>& nu) {
    g.set_masked(-nu[0], -nu[1], -nu[2], true);
    g.set_masked(nu[0], nu[1], nu[2], true);
}

double coeff_scale(const VarCoeffs& c) {
    double m = 0.0;
    for (const auto& v : c) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

Reconstructor::Reconstructor(const FrequencyPlan& plan, ReconOptions opt)
    : plan_(plan), opt_(opt) {}

ReconResult Reconstructor::run(const std::vector<FormValue>& bundle,
                               const SpatialGrid& out_grid) const {
    if (bundle.size() != plan_.entries.size())
        throw std::invalid_argument("reconstruct: bundle does not match the plan");

    const bool twofreq = plan_.two_frequency();
    const std::size_t nn = plan_.nodes.size();
    const FreqGeometry geo = plan_.geo;

    // Index entries by node/family.
    std::vector<NodeEntries> idx(nn);
    for (std::size_t i = 0; i < plan_.entries.size(); ++i) {
        const PlanEntry& e = plan_.entries[i];
        NodeEntries& ne = idx[e.node];
        const int iw = std::max(e.iw, 0);
        switch (e.kind) {
            case PairKind::A_shear: ne.a_entry[iw] = static_cast<int>(i); break;
            case PairKind::B_gradient:
                if (e.ir < 0)
                    ne.b0_entry[iw] = static_cast<int>(i);
                else
                    ne.b_sweep[iw].push_back(static_cast<int>(i));
                break;
            case PairKind::C_affine_right: ne.c_sweep.push_back(static_cast<int>(i)); break;
            case PairKind::D_affine_both: ne.d_entry = static_cast<int>(i); break;
            case PairKind::E_theta: ne.e_entry[iw] = static_cast<int>(i); break;
            case PairKind::F_grad_theta: ne.f_sweep.push_back(static_cast<int>(i)); break;
        }
    }

    auto slots_for = [&](int entry) {
        const PlanEntry& e = plan_.entries[entry];
        const CgoPair pair = build_pair(e.config, plan_.medium);
        return std::make_pair(pair_var_coefficients(pair_factors(pair.u, pair.v)),
                              pair.combined_phase);
    };
    auto value_of = [&](int entry) -> Complex {
        if (!bundle[entry].ok) throw std::runtime_error("entry flagged: " + bundle[entry].error);
        return bundle[entry].value;
    };

    auto infill = [&](FreqGrid& g) {
        if (opt_.support_infill)
            g.infill_masked_supported(out_grid);
        else
            g.infill_masked();
    };

    // ---- Stage 1 and 2: per-node extraction of y1, y2, y3 (y4, A-part). ----
    std::vector<NodeExtract> ex(nn);
    parallel_for(nn, opt_.workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t ni = b; ni < e; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            NodeExtract& nx = ex[ni];
            if (!nd.usable) {
                nx.ok = false;
                nx.error = nd.mask_reason;
                continue;
            }
            try {
                const double d2 = nd.d2, s = nd.s;
                if (!twofreq) {
                    const auto [ca, phA] = slots_for(idx[ni].a_entry[0]);
                    nx.y1 = value_of(idx[ni].a_entry[0]) / ca.m00[VY1];
                    const auto [cb0, phB0] = slots_for(idx[ni].b0_entry[0]);
                    nx.y2 = value_of(idx[ni].b0_entry[0]) / cb0.m00[VY2];

                    std::vector<double> rs;
                    std::vector<Complex> vals;
                    for (int ent : idx[ni].b_sweep[0]) {
                        rs.push_back(plan_.entries[ent].config.r);
                        vals.push_back(value_of(ent));
                    }
                    const PolyFit fit = fit_r_powers(rs, vals);
                    nx.condition = fit.condition;
                    nx.y3 = fit.coef[4] / (s * s * s * s / (d2 * d2));
                    if (s > 0.0) {
                        nx.y4 = fit.coef[2] / (2.0 * s * s);
                        nx.y4_valid = true;
                    }
                } else {
                    // Shear pair at both frequencies: the omega^0 part isolates
                    // y1, the omega^2 part is kept for the density stage.
                    const auto [ca1, pa1] = slots_for(idx[ni].a_entry[0]);
                    const auto [ca2, pa2] = slots_for(idx[ni].a_entry[1]);
                    const double w1 = plan_.omegas[0], w2 = plan_.omegas[1];
                    const auto [apart, bpart] = two_frequency_split(
                        value_of(idx[ni].a_entry[0]), value_of(idx[ni].a_entry[1]), w1, w2);
                    const Complex c1_y1 = (ca1.m00[VY1] - ca2.m00[VY1]) / (w1 * w1 - w2 * w2);
                    const Complex c0_y1 = ca1.m00[VY1] - w1 * w1 * c1_y1;
                    nx.y1 = bpart / c0_y1;
                    nx.a_part = apart;

                    std::array<PolyFit, 2> fits;
                    for (int iw = 0; iw < 2; ++iw) {
                        std::vector<double> rs;
                        std::vector<Complex> vals;
                        for (int ent : idx[ni].b_sweep[iw]) {
                            rs.push_back(plan_.entries[ent].config.r);
                            vals.push_back(value_of(ent));
                        }
                        fits[iw] = fit_r_powers(rs, vals);
                        nx.condition = std::max(nx.condition, fits[iw].condition);
                    }
                    const Complex lead = s * s * s * s / (d2 * d2);
                    nx.y3_raw_diff = fits[0].coef[4] - fits[1].coef[4];
                    nx.y3_raw_avg = 0.5 * (fits[0].coef[4] + fits[1].coef[4]);
                    nx.y3 = nx.y3_raw_avg / lead;
                    const auto [a1, b1] =
                        two_frequency_split(fits[0].coef[2], fits[1].coef[2], w1, w2);
                    (void)a1;
                    if (s > 0.0) {
                        nx.y4 = b1 / (2.0 * s * s);
                        nx.y4_valid = true;
                        nx.y2 = 4.0 * nx.y1 - nx.y4;
                    }
                }
                if (nx.condition > opt_.fit_condition_limit) {
                    nx.ok = false;
                    nx.error = "fit condition above limit";
                }
            } catch (const std::exception& err) {
                nx.ok = false;
                nx.error = err.what();
            }
        }
    });

    ReconResult res;
    for (auto& g : res.grids) g = FreqGrid(geo);
    ReconDiagnostics& diag = res.diag;
    diag.nodes_total = nn;

    double y3_cross_num = 0.0, y3_cross_den = 0.0;

    auto mask_everywhere = [&](const std::array<int, 3>& nu) {
        for (auto& g : res.grids) put_mask(g, nu);
    };

    for (std::size_t ni = 0; ni < nn; ++ni) {
        const PlanNode& nd = plan_.nodes[ni];
        const NodeExtract& nx = ex[ni];
        diag.max_fit_condition = std::max(diag.max_fit_condition, nx.condition);
        if (!nd.usable || !nx.ok) {
            mask_everywhere(nd.nu);
            if (nd.usable && !nx.ok) {
                ++diag.flagged_nodes;
                if (diag.notes.size() < 8) diag.notes.push_back("node flagged: " + nx.error);
            }
            continue;
        }
        ++diag.nodes_usable;
        put_value(res.grids[VY1], nd.nu, nx.y1);
        put_value(res.grids[VY3], nd.nu, nx.y3);
        if (nd.s == 0.0) put_mask(res.grids[VY3], nd.nu);
        if (!twofreq) {
            put_value(res.grids[VY2], nd.nu, nx.y2);
        } else {
            if (nx.y4_valid)
                put_value(res.grids[VY2], nd.nu, nx.y2);
            else
                put_mask(res.grids[VY2], nd.nu);
            y3_cross_num += std::norm(nx.y3_raw_diff);
            y3_cross_den += std::norm(nx.y3_raw_avg);
        }
        if (nd.step4_singular) {
            put_mask(res.grids[VZ1], nd.nu);
            ++diag.nodes_step4_masked;
        }
    }
    if (twofreq && y3_cross_den > 0.0)
        diag.y3_cross_consistency = std::sqrt(y3_cross_num / y3_cross_den);

    // y4 grid is diagnostic at omega = 0; at two frequencies it already fed y2.
    FreqGrid y4grid(geo);
    if (!twofreq) {
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            if (!nd.usable || !ex[ni].ok || !ex[ni].y4_valid)
                put_mask(y4grid, nd.nu);
            else
                put_value(y4grid, nd.nu, ex[ni].y4);
        }
        y4grid.symmetrize_conjugate();
        infill(y4grid);
    }

    for (int v : {VY1, VY2, VY3}) {
        res.grids[v].symmetrize_conjugate();
        diag.masked_fraction_tier1 = std::max(diag.masked_fraction_tier1,
                                              res.grids[v].masked_fraction());
        infill(res.grids[v]);
    }

    // ---- Stage 3 combination grids (exact linear algebra on grids). ----
    FreqGrid g1313(geo), gm1(geo), gm2(geo);
    {
        const std::size_t total = geo.size();
        for (std::size_t i = 0; i < total; ++i) {
            const Complex y1 = res.grids[VY1].values()[i];
            const Complex y2 = res.grids[VY2].values()[i];
            const Complex y3 = res.grids[VY3].values()[i];
            const ComboSolution cs = combo_solve({y1, y2, y3});
            g1313.values()[i] = cs.c1313;
            gm1.values()[i] = cs.m1;
            gm2.values()[i] = cs.m2;
        }
    }

    // ---- Density stage (two-frequency only). ----
    if (twofreq) {
        const double w1 = plan_.omegas[0], w2 = plan_.omegas[1];
        std::vector<std::array<Complex, 2>> rho(nn, {Complex(0.0), Complex(0.0)});
        std::vector<char> r11_ok(nn, 0), r33_ok(nn, 0);
        parallel_for(nn, opt_.workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t ni = b; ni < e; ++ni) {
                const PlanNode& nd = plan_.nodes[ni];
                if (!nd.usable || !ex[ni].ok) continue;
                try {
                    // rho11 from the omega^2 part of the shear-pair relation.
                    const auto [ca1, pa1] = slots_for(idx[ni].a_entry[0]);
                    const auto [ca2, pa2] = slots_for(idx[ni].a_entry[1]);
                    const double det = w1 * w1 - w2 * w2;
                    Complex known(0.0, 0.0);
                    for (int v : {VY1, VY2, VY3}) {
                        const Complex c1 = (ca1.m00[v] - ca2.m00[v]) / det;
                        known += c1 * at_neg(res.grids[v], nd.nu);
                    }
                    const Complex c1_r11 = (ca1.m00[VR11] - ca2.m00[VR11]) / det;
                    rho[ni][0] = (ex[ni].a_part - known) / c1_r11;
                    r11_ok[ni] = 1;

                    // rho33 from the theta pair at both frequencies. The
                    // extraction leans on the y2 grid, which is interpolated
                    // on the s = 0 column; skip it there.
                    if (nd.s == 0.0) continue;
                    Complex num(0.0, 0.0);
                    double den = 0.0;
                    for (int iw = 0; iw < 2; ++iw) {
                        const auto [ce, pe] = slots_for(idx[ni].e_entry[iw]);
                        Complex rest = value_of(idx[ni].e_entry[iw]);
                        for (int v : {VY1, VY2, VY3})
                            rest -= ce.m00[v] * at_neg(res.grids[v], nd.nu);
                        rest -= ce.m00[VR11] * rho[ni][0];
                        num += std::conj(ce.m00[VR33]) * rest;
                        den += std::norm(ce.m00[VR33]);
                    }
                    rho[ni][1] = num / den;
                    r33_ok[ni] = 1;
                } catch (const std::exception&) {
                }
            }
        });
        std::size_t eligible = 0, failed = 0;
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            if (r11_ok[ni])
                put_value(res.grids[VR11], nd.nu, rho[ni][0]);
            else
                put_mask(res.grids[VR11], nd.nu);
            if (r33_ok[ni])
                put_value(res.grids[VR33], nd.nu, rho[ni][1]);
            else
                put_mask(res.grids[VR33], nd.nu);
            if (nd.usable && ex[ni].ok) {
                ++eligible;
                if (!r11_ok[ni] || (!r33_ok[ni] && nd.s != 0.0)) ++failed;
            }
        }
        diag.stage_flagged_fraction = std::max(
            diag.stage_flagged_fraction,
            eligible ? static_cast<double>(failed) / eligible : 0.0);
        for (int v : {VR11, VR33}) {
            res.grids[v].symmetrize_conjugate();
            infill(res.grids[v]);
        }
    }

    // ---- Stage 4: z1 = F[c1133 - c1111]. ----
    {
        // Exact first moments of the tier-1 grids for the affine-pair path.
        std::array<std::array<FreqGrid, 3>, 3> mom1;  // [var: y1,y2,y3][axis]
        if (!twofreq)
            for (int v = 0; v < 3; ++v)
                for (int ax = 0; ax < 3; ++ax) mom1[v][ax] = res.grids[VY1 + v].moment(ax, 1);

        std::vector<Complex> z1(nn, Complex(0.0, 0.0));
        std::vector<char> z1_ok(nn, 0);
        parallel_for(nn, opt_.workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t ni = b; ni < e; ++ni) {
                const PlanNode& nd = plan_.nodes[ni];
                if (!nd.usable || !ex[ni].ok || nd.step4_singular) continue;
                try {
                    const double d2 = nd.d2, s = nd.s;
                    std::vector<double> rs;
                    std::vector<Complex> vals;
                    const auto& sweep = twofreq ? idx[ni].f_sweep : idx[ni].c_sweep;
                    for (int ent : sweep) {
                        const auto [sc, phase] = slots_for(ent);
                        Complex corr = value_of(ent);
                        if (!twofreq) {
                            for (int v = 0; v < 3; ++v) {
                                corr -= sc.m00[VY1 + v] * at_neg(res.grids[VY1 + v], nd.nu);
                                if (sc.has01) {
                                    Complex mom(0.0, 0.0);
                                    for (int ax = 0; ax < 3; ++ax)
                                        mom += sc.ev(ax) * at_neg(mom1[v][ax], nd.nu);
                                    corr -= sc.m01[VY1 + v] * mom;
                                }
                            }
                            const double scale = coeff_scale(sc.m00);
                            if (std::abs(sc.m00[VZ2]) > 1e-8 * scale ||
                                (sc.has01 && std::abs(sc.m01[VZ1]) > 1e-8 * scale))
                                throw std::runtime_error("unexpected coupling in affine pair");
                        } else {
                            // Off-lattice knowns at the slightly shifted pair frequency.
                            CVec3 kappa = phase;
                            const Vec3 k_im(kappa(0).imag(), kappa(1).imag(), kappa(2).imag());
                            for (int v : {VY1, VY2, VY3, VR11, VR33})
                                corr -= sc.m00[v] * res.grids[v].eval_offgrid(-k_im);
                        }
                        rs.push_back(plan_.entries[ent].config.r);
                        vals.push_back(corr);
                    }
                    const PolyFit fit = fit_r_powers(rs, vals);
                    if (fit.condition > opt_.fit_condition_limit)
                        throw std::runtime_error("stage-4 fit condition above limit");
                    const double kp2 = plan_.medium.at_omega(twofreq ? plan_.omegas[0] : 0.0).kp2();
                    const double lead =
                        (twofreq ? kp2 : plan_.medium.mu0) * s * s / d2;
                    z1[ni] = fit.coef[2] / lead;
                    z1_ok[ni] = 1;
                } catch (const std::exception&) {
                    z1_ok[ni] = 0;
                }
            }
        });
        std::size_t eligible = 0, failed = 0;
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            if (!nd.usable || !ex[ni].ok) continue;  // already masked everywhere
            if (z1_ok[ni]) {
                put_value(res.grids[VZ1], nd.nu, z1[ni]);
            } else {
                put_mask(res.grids[VZ1], nd.nu);
                if (!nd.step4_singular) ++failed;
            }
            if (!nd.step4_singular) ++eligible;
        }
        diag.stage_flagged_fraction = std::max(
            diag.stage_flagged_fraction,
            eligible ? static_cast<double>(failed) / eligible : 0.0);
        res.grids[VZ1].symmetrize_conjugate();
        diag.masked_fraction_z1 = res.grids[VZ1].masked_fraction();
        infill(res.grids[VZ1]);
    }

    // ---- Stage 5: z2 = F[c1111]. ----
    {
        std::array<std::array<FreqGrid, 3>, 4> mom1;   // vars y1,y2,y3,z1
        std::array<std::array<FreqGrid, 6>, 3> mom2;   // y vars, axis pairs
        static const std::array<std::array<int, 2>, 6> kPairs = {
            {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
        if (!twofreq) {
            for (int v = 0; v < 4; ++v)
                for (int ax = 0; ax < 3; ++ax)
                    mom1[v][ax] = res.grids[v == 3 ? VZ1 : VY1 + v].moment(ax, 1);
            for (int v = 0; v < 3; ++v)
                for (int p = 0; p < 6; ++p) {
                    const int m = kPairs[p][0], n = kPairs[p][1];
                    mom2[v][p] = m == n ? res.grids[VY1 + v].moment(m, 2)
                                        : res.grids[VY1 + v].moment(m, 1).moment(n, 1);
                }
        }

        std::vector<Complex> z2(nn, Complex(0.0, 0.0));
        std::vector<char> z2_ok(nn, 0);
        parallel_for(nn, opt_.workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t ni = b; ni < e; ++ni) {
                const PlanNode& nd = plan_.nodes[ni];
                if (!nd.usable || !ex[ni].ok) continue;
                try {
                    if (!twofreq) {
                        const auto [sc, phase] = slots_for(idx[ni].d_entry);
                        Complex corr = value_of(idx[ni].d_entry);
                        auto mom1_of = [&](int v, const Vec3& dir) {
                            Complex acc(0.0, 0.0);
                            for (int ax = 0; ax < 3; ++ax)
                                acc += dir(ax) * at_neg(mom1[v][ax], nd.nu);
                            return acc;
                        };
                        for (int v = 0; v < 4; ++v) {
                            const int var = v == 3 ? VZ1 : VY1 + v;
                            corr -= sc.m00[var] * at_neg(res.grids[var], nd.nu);
                            if (sc.has10) corr -= sc.m10[var] * mom1_of(v, sc.eu);
                            if (sc.has01) corr -= sc.m01[var] * mom1_of(v, sc.ev);
                            if (sc.has11 && v < 3) {
                                Complex acc(0.0, 0.0);
                                for (int p = 0; p < 6; ++p) {
                                    const int m = kPairs[p][0], n = kPairs[p][1];
                                    const double w = sc.eu(m) * sc.ev(n) +
                                                     (m == n ? 0.0 : sc.eu(n) * sc.ev(m));
                                    acc += w * at_neg(mom2[v][p], nd.nu);
                                }
                                corr -= sc.m11[var] * acc;
                            }
                        }
                        const double scale = coeff_scale(sc.m00) + 1e-300;
                        if (sc.has11 && std::abs(sc.m11[VZ1]) > 1e-8 * scale)
                            throw std::runtime_error("unexpected z1 second moment in stage 5");
                        z2[ni] = corr / sc.m00[VZ2];
                    } else {
                        // Only the degenerate r = 0 gradient pairs keep the
                        // stiffness coefficients at O(d^4); the large-r sweep
                        // would amplify known-grid errors against the tiny
                        // kp^4 divisor. The s = 0 column relies on
                        // interpolated upstream grids, so it stays masked.
                        if (nd.s == 0.0 || nd.step4_singular) continue;
                        Complex num(0.0, 0.0);
                        double den = 0.0;
                        for (int iw = 0; iw < 2; ++iw) {
                            const int ent = idx[ni].b0_entry[iw];
                            const auto [sc, phase] = slots_for(ent);
                            Complex corr = value_of(ent);
                            for (int v : {VY1, VY2, VY3, VZ1, VR11, VR33})
                                corr -= sc.m00[v] * at_neg(res.grids[v], nd.nu);
                            num += std::conj(sc.m00[VZ2]) * corr;
                            den += std::norm(sc.m00[VZ2]);
                        }
                        z2[ni] = num / den;
                    }
                    z2_ok[ni] = 1;
                } catch (const std::exception&) {
                    z2_ok[ni] = 0;
                }
            }
        });
        std::size_t eligible = 0, failed = 0;
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            if (!nd.usable || !ex[ni].ok) continue;
            const bool by_design = twofreq && (nd.s == 0.0 || nd.step4_singular);
            if (z2_ok[ni]) {
                put_value(res.grids[VZ2], nd.nu, z2[ni]);
            } else {
                put_mask(res.grids[VZ2], nd.nu);
                if (!by_design) ++failed;
            }
            if (!by_design) ++eligible;
        }
        diag.stage_flagged_fraction = std::max(
            diag.stage_flagged_fraction,
            eligible ? static_cast<double>(failed) / eligible : 0.0);
        res.grids[VZ2].symmetrize_conjugate();
        infill(res.grids[VZ2]);
    }

    // ---- Assembly to component grids and spatial fields. ----
    {
        FreqGrid gc1111 = res.grids[VZ2];
        FreqGrid gc1122 = res.grids[VZ2];
        gc1122.axpy(Complex(-1.0), gm1);
        FreqGrid gc1133 = res.grids[VZ2];
        gc1133.axpy(Complex(1.0), res.grids[VZ1]);
        FreqGrid gc3333 = gm2;
        gc3333.axpy(Complex(2.0), res.grids[VZ1]);
        gc3333.axpy(Complex(1.0), res.grids[VZ2]);

        res.stiffness = TIPerturbationField(out_grid);
        const std::array<const FreqGrid*, 5> comp = {&gc1111, &gc1122, &gc1133, &g1313, &gc3333};
        double mi = 0.0;
        for (int c = 0; c < 5; ++c) {
            double m = 0.0;
            res.stiffness.comps[c] = comp[c]->inverse_to_field(out_grid, &m);
            mi = std::max(mi, m);
        }
        res.density = DensityPerturbationField(out_grid);
        if (twofreq) {
            double m = 0.0;
            res.density.rho11 = res.grids[VR11].inverse_to_field(out_grid, &m);
            mi = std::max(mi, m);
            res.density.rho33 = res.grids[VR33].inverse_to_field(out_grid, &m);
            mi = std::max(mi, m);
            res.has_density = true;
        }
        diag.max_inverse_imag = mi;
    }

    // ---- Consistency diagnostics. ----
    if (opt_.collect_consistency) {
        if (!twofreq) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < geo.size(); ++i) {
                const Complex ref = 2.0 * gm1.values()[i] - gm2.values()[i];
                num += std::norm(y4grid.values()[i] - ref);
                den += std::norm(ref);
            }
            diag.y4_consistency = den > 0.0 ? std::sqrt(num / den) : 0.0;
        }
        double num = 0.0, den = 0.0;
        for (std::size_t ni = 0; ni < nn; ++ni) {
            const PlanNode& nd = plan_.nodes[ni];
            if (!nd.usable || !ex[ni].ok) continue;
            for (int ent : idx[ni].b_sweep[0]) {
                const auto [sc, phase] = slots_for(ent);
                Complex pred(0.0, 0.0);
                for (int v = 0; v < kNumVars; ++v)
                    pred += sc.m00[v] * at_neg(res.grids[v], nd.nu);
                num += std::norm(bundle[ent].value - pred);
                den += std::norm(bundle[ent].value);
            }
        }
        diag.data_consistency = den > 0.0 ? std::sqrt(num / den) : 0.0;
    }

    diag.flagged_fraction =
        diag.nodes_total > 0 ? static_cast<double>(diag.flagged_nodes) / diag.nodes_total : 0.0;
    diag.low_confidence =
        diag.flagged_fraction > 0.20 || diag.stage_flagged_fraction > 0.20;
    return res;
}

ReconResult reconstruct_from_bundle(const FrequencyPlan& plan,
                                    const std::vector<FormValue>& bundle,
                                    const SpatialGrid& out_grid, const ReconOptions& opt) {
    return Reconstructor(plan, opt).run(bundle, out_grid);
}

}  // namespace tilab
