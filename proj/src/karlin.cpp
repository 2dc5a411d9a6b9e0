#include "sparsecert/karlin.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sparsecert/alternant.hpp"

namespace sparsecert {

namespace {

constexpr double kTinyCoeff = 1e-12;

double coeff_scale(const std::vector<double>& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::fabs(v));
    return m;
}

// reported scale constant: |leading coefficient|, falling back to the
// largest coefficient magnitude when the leading one vanishes
double scale_constant(const SparsePolynomial& p) {
    const double maxc = coeff_scale(p.coefficients());
    if (maxc == 0.0) return 0.0;
    const double lead = std::fabs(p.leading_coefficient());
    return lead > kTinyCoeff * maxc ? lead : maxc;
}

// detpoly coefficients, sign-fixed to be nonnegative on the window and
// scaled to unit coefficient 2-norm (smooth in the knots)
struct ShapeBasis {
    std::vector<double> coeffs; // over the full exponent vector
    bool ok = false;
};

ShapeBasis shape_basis(const FunctionFamily& fam, const std::vector<Knot>& rows,
                       int lo_member, int hi_member, int full_size, double probe_lo,
                       double probe_hi) {
    ShapeBasis out;
    const FunctionFamily sub =
        (lo_member == 0 && hi_member == full_size - 1) ? fam : fam.subfamily(lo_member, hi_member);
    std::vector<double> c;
    try {
        c = detpoly_coefficients(sub, rows);
    } catch (const Error&) {
        return out;
    }
    double norm = 0.0;
    for (double v : c) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 1e-150)) return out;

    std::vector<double> full(static_cast<std::size_t>(full_size), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
        full[static_cast<std::size_t>(lo_member) + i] = c[i] / norm;

    // orient: positive at the argmax of |value| over the probe window
    const ExponentVector& exps = fam.power_exponents();
    SparsePolynomial p(exps, full);
    double best = 0.0, val = 0.0;
    for (int i = 0; i <= 192; ++i) {
        const double x = probe_lo + (probe_hi - probe_lo) * i / 192.0;
        const double v = eval(p, x);
        if (std::fabs(v) > best) {
            best = std::fabs(v);
            val = v;
        }
    }
    if (best == 0.0) return out;
    if (val < 0.0)
        for (double& v : full) v = -v;
    out.coeffs = std::move(full);
    out.ok = true;
    return out;
}

// ---- pattern descriptions ----------------------------------------------

struct KnotPattern {
    // pinned rows present in every iterate (zeros of f, endpoint rows)
    std::vector<Knot> star_fixed, upper_fixed;
    int star_free = 0, upper_free = 0; // interior double knots to solve for
    // member range of the determinant family (column elimination on the
    // half line); defaults to the full family
    int star_lo = 0, star_hi = -1, upper_lo = 0, upper_hi = -1;
    bool star_unit_leading = false; // f_* pinned to the leading coefficient
};

// assignment of an ordered free-knot vector to the two shapes: the even
// pattern alternates star/upper starting with star, the odd pattern
// starts with upper
void split_free(const std::vector<double>& z, bool star_first, int star_free, int upper_free,
                std::vector<double>& xs, std::vector<double>& ys) {
    xs.clear();
    ys.clear();
    bool star_turn = star_first;
    for (double v : z) {
        auto& dst = star_turn ? xs : ys;
        auto& oth = star_turn ? ys : xs;
        if (static_cast<int>(dst.size()) < (star_turn ? star_free : upper_free))
            dst.push_back(v);
        else
            oth.push_back(v);
        star_turn = !star_turn;
    }
    // overflow safety: anything beyond the quota lands in the other list
    while (static_cast<int>(xs.size()) > star_free) {
        ys.push_back(xs.back());
        xs.pop_back();
    }
    while (static_cast<int>(ys.size()) > upper_free) {
        xs.push_back(ys.back());
        ys.pop_back();
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
}

std::vector<Knot> with_doubles(std::vector<Knot> fixed, const std::vector<double>& xs) {
    for (double x : xs) fixed.push_back({x, 2, false});
    std::sort(fixed.begin(), fixed.end(),
              [](const Knot& a, const Knot& b) { return a.location < b.location; });
    return fixed;
}

// ---- the VarPro solver ---------------------------------------------------

struct SolveSetup {
    const SparsePolynomial* f = nullptr;
    FunctionFamily fam = FunctionFamily::powers(ExponentVector({0.0}));
    KnotPattern pattern;
    bool star_first = true; // interlacing order of the free knots
    bool halfline = false;
    double a = 0.0, b = 1.0;    // knot window (b = soft scale for half line)
    double probe_hi = 1.0;      // orientation probe window
    int free_total = 0;
};

struct SolveState {
    std::vector<double> z;       // ordered free knots
    std::vector<double> star_coeffs, upper_coeffs;
    double c_star = 0.0, c_upper = 0.0;
    double rnorm = 0.0;
    bool ok = false;
};

std::vector<double> knots_from_theta(const SolveSetup& s, const std::vector<double>& theta) {
    const int L = s.free_total;
    std::vector<double> z(static_cast<std::size_t>(L));
    if (L == 0) return z;
    if (!s.halfline) {
        // gap weights, last gap gauge-fixed to 1
        double sum = 1.0;
        std::vector<double> w(static_cast<std::size_t>(L));
        for (int i = 0; i < L; ++i) {
            w[static_cast<std::size_t>(i)] = std::exp(std::clamp(theta[static_cast<std::size_t>(i)], -40.0, 40.0));
            sum += w[static_cast<std::size_t>(i)];
        }
        double cum = 0.0;
        for (int i = 0; i < L; ++i) {
            cum += w[static_cast<std::size_t>(i)];
            z[static_cast<std::size_t>(i)] = s.a + (s.b - s.a) * cum / sum;
        }
    } else {
        double cum = 0.0;
        for (int i = 0; i < L; ++i) {
            cum += std::exp(std::clamp(theta[static_cast<std::size_t>(i)], -40.0, 40.0));
            z[static_cast<std::size_t>(i)] = cum;
        }
    }
    return z;
}

SolveState evaluate(const SolveSetup& s, const std::vector<double>& theta) {
    SolveState st;
    st.z = knots_from_theta(s, theta);
    std::vector<double> xs, ys;
    split_free(st.z, s.star_first, s.pattern.star_free, s.pattern.upper_free, xs, ys);

    const int full = static_cast<int>(s.f->size());
    const int shi = s.pattern.star_hi < 0 ? full - 1 : s.pattern.star_hi;
    const int uhi = s.pattern.upper_hi < 0 ? full - 1 : s.pattern.upper_hi;

    ShapeBasis star = shape_basis(s.fam, with_doubles(s.pattern.star_fixed, xs),
                                  s.pattern.star_lo, shi, full, s.halfline ? 0.0 : s.a,
                                  s.probe_hi);
    ShapeBasis upper = shape_basis(s.fam, with_doubles(s.pattern.upper_fixed, ys),
                                   s.pattern.upper_lo, uhi, full, s.halfline ? 0.0 : s.a,
                                   s.probe_hi);
    if (!star.ok || !upper.ok) {
        st.rnorm = 1e100;
        return st;
    }

    const auto& fc = s.f->coefficients();
    const int n1 = full;
    Vector target(n1);
    for (int i = 0; i < n1; ++i) target(i) = fc[static_cast<std::size_t>(i)];

    if (s.pattern.star_unit_leading) {
        // f_* is pinned to carry the full leading coefficient
        const double lead = star.coeffs[static_cast<std::size_t>(shi)];
        if (!(std::fabs(lead) > 1e-150)) {
            st.rnorm = 1e100;
            return st;
        }
        const double an = fc.back();
        std::vector<double> fstar(star.coeffs);
        for (double& v : fstar) v *= an / lead;
        Vector rem = target;
        for (int i = 0; i < n1; ++i) rem(i) -= fstar[static_cast<std::size_t>(i)];
        // single linear unknown
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n1; ++i) {
            num += upper.coeffs[static_cast<std::size_t>(i)] * rem(i);
            den += upper.coeffs[static_cast<std::size_t>(i)] * upper.coeffs[static_cast<std::size_t>(i)];
        }
        const double c = den > 0.0 ? num / den : 0.0;
        double rn = 0.0;
        for (int i = 0; i < n1; ++i) {
            const double r = fstar[static_cast<std::size_t>(i)] + c * upper.coeffs[static_cast<std::size_t>(i)] - target(i);
            rn += r * r;
        }
        st.star_coeffs = std::move(fstar);
        st.upper_coeffs = upper.coeffs;
        st.c_star = an / lead;
        st.c_upper = c;
        st.rnorm = std::sqrt(rn);
        st.ok = true;
        return st;
    }

    Matrix basis(n1, 2);
    for (int i = 0; i < n1; ++i) {
        basis(i, 0) = star.coeffs[static_cast<std::size_t>(i)];
        basis(i, 1) = upper.coeffs[static_cast<std::size_t>(i)];
    }
    Vector c = basis.colPivHouseholderQr().solve(target);
    st.rnorm = (basis * c - target).norm();
    st.star_coeffs = star.coeffs;
    st.upper_coeffs = upper.coeffs;
    st.c_star = c(0);
    st.c_upper = c(1);
    st.ok = true;
    return st;
}

// Levenberg-Marquardt on the reparameterized free knots
SolveState solve_pattern(const SolveSetup& s, const std::vector<double>& theta0,
                         const DecomposeConfig& cfg) {
    const int L = s.free_total;
    std::vector<double> theta = theta0;
    SolveState best = evaluate(s, theta);
    if (L == 0) return best;

    const auto& fc = s.f->coefficients();
    double fnorm = 0.0;
    for (double v : fc) fnorm += v * v;
    fnorm = std::sqrt(fnorm);
    const double target_rnorm = 1e-13 * std::max(1.0, fnorm);

    double lambda = 1e-3;
    SolveState cur = best;
    for (int iter = 0; iter < cfg.max_iterations && cur.ok; ++iter) {
        if (cur.rnorm <= target_rnorm) break;
        const int n1 = static_cast<int>(s.f->size());
        // residual of the current iterate
        Vector r(n1);
        for (int i = 0; i < n1; ++i)
            r(i) = cur.c_star * cur.star_coeffs[static_cast<std::size_t>(i)] +
                   cur.c_upper * cur.upper_coeffs[static_cast<std::size_t>(i)] -
                   fc[static_cast<std::size_t>(i)];
        if (s.pattern.star_unit_leading) {
            for (int i = 0; i < n1; ++i)
                r(i) = cur.star_coeffs[static_cast<std::size_t>(i)] +
                       cur.c_upper * cur.upper_coeffs[static_cast<std::size_t>(i)] -
                       fc[static_cast<std::size_t>(i)];
        }

        Matrix jac(n1, L);
        bool jac_ok = true;
        for (int j = 0; j < L && jac_ok; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(theta[static_cast<std::size_t>(j)]));
            std::vector<double> tp = theta;
            tp[static_cast<std::size_t>(j)] += h;
            SolveState sp = evaluate(s, tp);
            if (!sp.ok) {
                jac_ok = false;
                break;
            }
            for (int i = 0; i < n1; ++i) {
                const double rp = s.pattern.star_unit_leading
                                      ? sp.star_coeffs[static_cast<std::size_t>(i)] +
                                            sp.c_upper * sp.upper_coeffs[static_cast<std::size_t>(i)] -
                                            fc[static_cast<std::size_t>(i)]
                                      : sp.c_star * sp.star_coeffs[static_cast<std::size_t>(i)] +
                                            sp.c_upper * sp.upper_coeffs[static_cast<std::size_t>(i)] -
                                            fc[static_cast<std::size_t>(i)];
                jac(i, j) = (rp - r(i)) / h;
            }
        }
        if (!jac_ok) break;

        Matrix jtj = jac.transpose() * jac;
        Vector jtr = jac.transpose() * r;
        bool advanced = false;
        for (int attempt = 0; attempt < 24; ++attempt) {
            Matrix m = jtj;
            for (int d = 0; d < L; ++d) m(d, d) += lambda * (jtj(d, d) + 1e-12);
            Vector step = m.ldlt().solve(-jtr);
            std::vector<double> tn = theta;
            for (int j = 0; j < L; ++j) tn[static_cast<std::size_t>(j)] += step(j);
            SolveState sn = evaluate(s, tn);
            if (sn.ok && sn.rnorm < cur.rnorm) {
                theta = tn;
                cur = sn;
                lambda = std::max(lambda / 3.0, 1e-12);
                advanced = true;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e14) break;
        }
        if (cur.rnorm < best.rnorm) best = cur;
        if (!advanced) break;
    }
    if (cur.ok && cur.rnorm < best.rnorm) best = cur;
    return best;
}

std::vector<double> theta_from_positions(const SolveSetup& s, const std::vector<double>& z) {
    const int L = s.free_total;
    std::vector<double> theta(static_cast<std::size_t>(L), 0.0);
    if (L == 0) return theta;
    if (!s.halfline) {
        std::vector<double> gaps;
        double prev = s.a;
        for (double v : z) {
            gaps.push_back(std::max(v - prev, 1e-12));
            prev = v;
        }
        const double last = std::max(s.b - prev, 1e-12);
        for (int i = 0; i < L; ++i)
            theta[static_cast<std::size_t>(i)] = std::log(gaps[static_cast<std::size_t>(i)] / last);
    } else {
        double prev = 0.0;
        for (int i = 0; i < L; ++i) {
            theta[static_cast<std::size_t>(i)] = std::log(std::max(z[static_cast<std::size_t>(i)] - prev, 1e-12));
            prev = z[static_cast<std::size_t>(i)];
        }
    }
    return theta;
}

// Chebyshev-spaced interior startup positions
std::vector<double> chebyshev_positions(double a, double b, int count) {
    std::vector<double> z(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
        z[static_cast<std::size_t>(k) - 1] =
            a + (b - a) * 0.5 * (1.0 - std::cos(M_PI * k / (count + 1)));
    return z;
}

struct GridReport {
    double residual = 0.0;
    double min_star = 0.0;
    double min_upper = 0.0;
    double fsup = 0.0;
    double upper_at_b = 0.0;
};

GridReport grid_verify(const SparsePolynomial& f, const SparsePolynomial& fs,
                       const SparsePolynomial& fu, double lo, double hi, int points,
                       double b_probe) {
    GridReport g;
    g.min_star = std::numeric_limits<double>::infinity();
    g.min_upper = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / points;
        const double vf = eval(f, x);
        const double vs = eval(fs, x);
        const double vu = eval(fu, x);
        g.residual = std::max(g.residual, std::fabs(vf - vs - vu));
        g.min_star = std::min(g.min_star, vs);
        g.min_upper = std::min(g.min_upper, vu);
        g.fsup = std::max(g.fsup, std::fabs(vf));
    }
    g.upper_at_b = eval(fu, b_probe);
    return g;
}

SparsePolynomial make_poly(const ExponentVector& exps, std::vector<double> coeffs, double scale) {
    for (double& c : coeffs) c *= scale;
    return SparsePolynomial(exps, std::move(coeffs));
}

KnotSet knots_of(std::vector<Knot> v, const Interval& iv) {
    std::sort(v.begin(), v.end(), [](const Knot& a, const Knot& b) { return a.location < b.location; });
    return KnotSet(std::move(v), iv);
}

void check_strictly_positive(const SparsePolynomial& f, double lo, double hi, int points) {
    double min_val = 0.0, min_x = lo;
    bool first = true;
    for (int i = 0; i <= points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / points;
        const double v = eval(f, x);
        if (first || v < min_val) {
            min_val = v;
            min_x = x;
            first = false;
        }
    }
    if (!(min_val > 0.0)) throw NotStrictlyPositiveError(min_x, min_val);
}

// interior-double interlacing of the two knot sets
bool interlaces(const KnotSet& star, const KnotSet& upper) {
    auto xs = star.interior_locations();
    auto ys = upper.interior_locations();
    std::vector<std::pair<double, int>> merged;
    for (double v : xs) merged.emplace_back(v, 0);
    for (double v : ys) merged.emplace_back(v, 1);
    std::sort(merged.begin(), merged.end());
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        if (merged[i].first == merged[i + 1].first) return false;
        if (merged[i].second == merged[i + 1].second) return false;
    }
    return true;
}

Decomposition assemble(const SparsePolynomial& f, const Interval& iv, const SolveState& st,
                       const KnotPattern& pattern, bool star_first,
                       const DecomposeConfig& cfg, bool halfline) {
    std::vector<double> xs, ys;
    split_free(st.z, star_first, pattern.star_free, pattern.upper_free, xs, ys);

    const ExponentVector& exps = f.exponents();
    SparsePolynomial fs = make_poly(exps, st.star_coeffs,
                                    pattern.star_unit_leading ? 1.0 : st.c_star);
    SparsePolynomial fu = make_poly(exps, st.upper_coeffs, st.c_upper);

    std::vector<Knot> star_knots = with_doubles(pattern.star_fixed, xs);
    std::vector<Knot> upper_knots = with_doubles(pattern.upper_fixed, ys);

    double lo = iv.left();
    double hi;
    double b_probe;
    if (!halfline) {
        hi = iv.b;
        b_probe = iv.b;
    } else {
        double maxknot = 0.0;
        for (const Knot& k : star_knots) maxknot = std::max(maxknot, k.location);
        for (const Knot& k : upper_knots) maxknot = std::max(maxknot, k.location);
        hi = std::max({10.0 * (1.0 + maxknot), 1.5 * halfline_dominance_bound(f),
                       1.5 * halfline_dominance_bound(fs), 1.5 * halfline_dominance_bound(fu)});
        b_probe = 0.0; // no right endpoint on the half line
    }
    GridReport rep = grid_verify(f, fs, fu, lo, hi, cfg.grid_points, b_probe);

    Decomposition d{std::move(fs),
                    std::move(fu),
                    knots_of(star_knots, iv),
                    knots_of(upper_knots, iv),
                    0.0,
                    0.0,
                    rep.residual,
                    rep.min_star,
                    rep.min_upper,
                    false,
                    false};
    d.c_star = scale_constant(d.f_star);
    d.c_upper = scale_constant(d.f_upper);
    d.degenerate_star = d.f_star.is_zero(kTinyCoeff * coeff_scale(f.coefficients()));
    d.degenerate_upper = d.f_upper.is_zero(kTinyCoeff * coeff_scale(f.coefficients()));

    const double fsup = std::max(rep.fsup, 1e-300);
    if (rep.residual > cfg.residual_rel_tol * fsup ||
        rep.min_star < -cfg.nonneg_rel_tol * fsup || rep.min_upper < -cfg.nonneg_rel_tol * fsup)
        throw NewtonDivergenceError("decomposition failed verification", st.z, st.rnorm);
    return d;
}

Decomposition solve_with_restarts(const SparsePolynomial& f, const Interval& iv,
                                  SolveSetup& setup, const DecomposeConfig& cfg,
                                  const std::vector<double>& init_positions) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> jitter(-1.5, 1.5);
    SolveState best;
    best.rnorm = 1e300;
    std::vector<double> theta0 = theta_from_positions(setup, init_positions);
    for (int attempt = 0; attempt <= cfg.max_restarts; ++attempt) {
        std::vector<double> theta = theta0;
        if (attempt > 0)
            for (double& t : theta) t += jitter(rng);
        SolveState st = solve_pattern(setup, theta, cfg);
        if (st.ok && st.rnorm < best.rnorm) best = st;
        double fnorm = 0.0;
        for (double v : f.coefficients()) fnorm += v * v;
        if (best.ok && best.rnorm <= 1e-11 * std::max(1.0, std::sqrt(fnorm))) break;
    }
    if (!best.ok)
        throw NewtonDivergenceError("knot solver failed to produce an iterate", {}, 1e300);
    try {
        return assemble(f, iv, best, setup.pattern, setup.star_first, cfg, setup.halfline);
    } catch (const NewtonDivergenceError&) {
        throw NewtonDivergenceError("knot solver did not reach the decomposition", best.z,
                                    best.rnorm);
    }
}

Decomposition decompose_interval_impl(const SparsePolynomial& f, const Interval& iv,
                                      const DecomposeConfig& cfg, bool require_an_positive) {
    const ExponentVector& exps = f.exponents();
    iv.require_admissible(exps);
    if (iv.a == 0.0 && exps[0] != 0.0)
        throw Error(errc::domain_error, "a = 0 requires alpha_0 = 0");
    check_strictly_positive(f, iv.a, iv.b, cfg.grid_points);
    // a_n = 0 is tolerated (the decomposition exists for any positive f on
    // a compact interval); a strictly negative leading coefficient is not
    if (require_an_positive && f.leading_coefficient() < 0.0)
        throw Error(errc::bad_leading_coefficient, "leading coefficient must not be negative");

    const int n = f.order();
    const ExponentVector& ev = exps;

    if (n == 0) {
        // trivial order: f_* = f, f^* = 0
        SparsePolynomial fs = f;
        SparsePolynomial fu = make_poly(ev, std::vector<double>(f.size(), 0.0), 1.0);
        GridReport rep = grid_verify(f, fs, fu, iv.a, iv.b, cfg.grid_points, iv.b);
        Decomposition d{std::move(fs), std::move(fu), KnotSet({}, iv), KnotSet({}, iv),
                        0, 0, rep.residual, rep.min_star, rep.min_upper, false, true};
        d.c_star = scale_constant(d.f_star);
        d.c_upper = 0.0;
        return d;
    }

    SolveSetup setup;
    setup.f = &f;
    setup.fam = FunctionFamily::powers(ev);
    setup.halfline = false;
    setup.a = iv.a;
    setup.b = iv.b;
    setup.probe_hi = iv.b;

    const int m = n / 2;
    if (n % 2 == 0) {
        setup.pattern.star_free = m;
        setup.pattern.upper_free = m - 1;
        setup.pattern.upper_fixed = {{iv.a, 1, true}, {iv.b, 1, true}};
        setup.star_first = true;
    } else {
        setup.pattern.star_free = m;
        setup.pattern.upper_free = m;
        setup.pattern.star_fixed = {{iv.a, 1, true}};
        setup.pattern.upper_fixed = {{iv.b, 1, true}};
        setup.star_first = false; // a < y_1 < x_1 < ... < y_m < x_m < b
    }
    setup.free_total = setup.pattern.star_free + setup.pattern.upper_free;

    Decomposition d = solve_with_restarts(
        f, iv, setup, cfg, chebyshev_positions(iv.a, iv.b, setup.free_total));
    if (d.knots_star.index() != n || d.knots_upper.index() != n ||
        !interlaces(d.knots_star, d.knots_upper))
        throw NewtonDivergenceError("solution violates the knot pattern", {}, d.residual);
    return d;
}

} // namespace

Decomposition decompose_interval(const SparsePolynomial& f, const Interval& iv,
                                 const DecomposeConfig& cfg) {
    if (iv.is_halfline())
        throw Error(errc::domain_error, "decompose_interval needs a closed interval");
    return decompose_interval_impl(f, iv, cfg, true);
}

Decomposition decompose_halfline(const SparsePolynomial& f, const DecomposeConfig& cfg) {
    const ExponentVector& ev = f.exponents();
    if (ev[0] != 0.0)
        throw Error(errc::domain_error, "half-line decomposition requires alpha_0 = 0");
    if (ev.has_negative())
        throw Error(errc::domain_error, "half-line decomposition requires nonnegative exponents");
    const int n = f.order();
    const Interval iv = Interval::halfline();

    if (n == 0) {
        if (!(f.coefficients()[0] > 0.0))
            throw NotStrictlyPositiveError(0.0, f.coefficients()[0]);
        SparsePolynomial fs = f;
        SparsePolynomial fu = make_poly(ev, std::vector<double>(f.size(), 0.0), 1.0);
        Decomposition d{std::move(fs), std::move(fu), KnotSet({}, iv), KnotSet({}, iv),
                        0, 0, 0.0, f.coefficients()[0], 0.0, false, true};
        d.c_star = scale_constant(d.f_star);
        return d;
    }

    const double an = f.leading_coefficient();
    if (an < 0.0)
        throw Error(errc::tail_negative, "negative leading coefficient: f < 0 for large x");
    if (an == 0.0)
        throw Error(errc::bad_leading_coefficient, "leading coefficient must be positive");
    const double horizon = std::max(1.0, 2.0 * halfline_dominance_bound(f));
    check_strictly_positive(f, 0.0, horizon, cfg.grid_points);

    SolveSetup setup;
    setup.f = &f;
    setup.fam = FunctionFamily::powers(ev);
    setup.halfline = true;
    setup.a = 0.0;
    setup.b = horizon;
    setup.probe_hi = horizon;

    const int m = n / 2;
    if (n % 2 == 0) {
        // f_* spans the whole family and carries a_n; f^* drops both the
        // constant and the leading member and vanishes at 0
        setup.pattern.star_free = m;
        setup.pattern.upper_free = m - 1;
        setup.pattern.star_unit_leading = true;
        setup.pattern.upper_lo = 1;
        setup.pattern.upper_hi = n - 1;
        setup.star_first = true;
    } else {
        // f_* drops the constant member (vanishes at 0) and carries a_n;
        // f^* drops the leading member
        setup.pattern.star_free = m;
        setup.pattern.upper_free = m;
        setup.pattern.star_unit_leading = true;
        setup.pattern.star_lo = 1;
        setup.pattern.star_hi = n;
        setup.pattern.upper_lo = 0;
        setup.pattern.upper_hi = n - 1;
        setup.star_first = false; // 0 < y_1 < x_2 < ... < y_m < x_{m+1}
    }
    setup.free_total = setup.pattern.star_free + setup.pattern.upper_free;

    // characteristic knot scale from the coefficient balance
    double scale = 1.0;
    const auto& fc = f.coefficients();
    if (std::fabs(fc[0]) > 0.0)
        scale = std::pow(std::fabs(fc[0]) / an, 1.0 / (ev.max_exponent() - ev.min_exponent()));
    std::vector<double> init(static_cast<std::size_t>(setup.free_total), scale);
    for (int i = 0; i < setup.free_total; ++i) {
        const double t = setup.free_total > 1
                             ? static_cast<double>(i) / (setup.free_total - 1)
                             : 0.5;
        init[static_cast<std::size_t>(i)] = scale * (0.4 + 1.6 * t);
    }

    Decomposition d = solve_with_restarts(f, iv, setup, cfg, init);

    // the structural zero at the origin, per parity
    std::vector<Knot> star_e = d.knots_star.entries();
    std::vector<Knot> upper_e = d.knots_upper.entries();
    if (n % 2 == 0)
        upper_e.insert(upper_e.begin(), Knot{0.0, 1, true});
    else
        star_e.insert(star_e.begin(), Knot{0.0, 1, true});
    d.knots_star = KnotSet(star_e, iv);
    d.knots_upper = KnotSet(upper_e, iv);
    return d;
}

Decomposition certify_nonneg(const SparsePolynomial& f, const Interval& iv,
                             const DecomposeConfig& cfg) {
    if (iv.is_halfline())
        throw Error(errc::domain_error, "certify_nonneg needs a closed interval");
    const ExponentVector& ev = f.exponents();
    iv.require_admissible(ev);
    if (iv.a == 0.0 && ev[0] != 0.0)
        throw Error(errc::domain_error, "a = 0 requires alpha_0 = 0");

    // grid nonnegativity first
    double fsup = 0.0, min_val = 0.0, min_x = iv.a;
    for (int i = 0; i <= cfg.grid_points; ++i) {
        const double x = iv.a + (iv.b - iv.a) * static_cast<double>(i) / cfg.grid_points;
        const double v = eval(f, x);
        fsup = std::max(fsup, std::fabs(v));
        if (v < min_val) {
            min_val = v;
            min_x = x;
        }
    }
    if (min_val < -1e-10 * std::max(fsup, 1e-300))
        throw NegativeSomewhereError(min_x, min_val);

    ZeroCount zc = count_zeros(f, iv);
    const int n = f.order();

    if (zc.zeros.empty())
        return decompose_interval_impl(f, iv, cfg, false);

    // multiplicity budget of the pinned zeros: 2 per interior zero, 1 per
    // boundary zero (interior zeros of a nonnegative function are even)
    int r = 0;
    bool zero_at_a = false, zero_at_b = false;
    std::vector<Knot> pinned;
    for (const auto& z : zc.zeros) {
        const bool boundary = z.location == iv.a || z.location == iv.b;
        if (boundary) {
            pinned.push_back({z.location, 1, true});
            r += 1;
            zero_at_a |= z.location == iv.a;
            zero_at_b |= z.location == iv.b;
        } else {
            if (z.nodal)
                throw NegativeSomewhereError(z.location, 0.0); // sign change inside
            pinned.push_back({z.location, 2, false});
            r += 2;
        }
    }
    if (r > n)
        throw Error(errc::too_many_zeros, "zero multiplicity exceeds the family order");

    const int s = n - r;
    if (s == 0) {
        // fully pinned: one side of the decomposition collapses
        const ExponentVector& exps = f.exponents();
        SparsePolynomial zero = make_poly(exps, std::vector<double>(f.size(), 0.0), 1.0);
        const bool upper_takes_f = zero_at_b; // f_*(b) > 0 is impossible then
        SparsePolynomial fs = upper_takes_f ? zero : f;
        SparsePolynomial fu = upper_takes_f ? f : zero;
        std::vector<Knot> star_k, upper_k;
        for (const Knot& k : pinned) star_k.push_back(k);
        if (upper_takes_f) {
            upper_k = pinned;
            star_k.clear();
        } else {
            upper_k.push_back({iv.b, 1, true});
        }
        GridReport rep = grid_verify(f, fs, fu, iv.a, iv.b, cfg.grid_points, iv.b);
        Decomposition d{std::move(fs), std::move(fu), knots_of(star_k, iv),
                        knots_of(upper_k, iv), 0, 0, rep.residual, rep.min_star,
                        rep.min_upper, upper_takes_f, !upper_takes_f};
        d.c_star = scale_constant(d.f_star);
        d.c_upper = scale_constant(d.f_upper);
        return d;
    }

    // distribute the remaining index budget as in the strictly positive
    // case; a boundary zero of f can absorb a parity unit through its
    // derivative row
    SolveSetup setup;
    setup.f = &f;
    setup.fam = FunctionFamily::powers(ev);
    setup.halfline = false;
    setup.a = iv.a;
    setup.b = iv.b;
    setup.probe_hi = iv.b;
    setup.pattern.star_fixed = pinned;
    setup.pattern.upper_fixed = pinned;

    auto bump_endpoint = [&](std::vector<Knot>& rows, double loc) -> bool {
        for (Knot& k : rows) {
            if (k.location == loc && k.multiplicity == 1) {
                k.multiplicity = 2;
                return true;
            }
        }
        return false;
    };

    int star_budget = s, upper_budget = s;
    if (!zero_at_b) {
        setup.pattern.upper_fixed.push_back({iv.b, 1, true});
        upper_budget -= 1;
    }
    if (star_budget % 2 == 1) {
        if (!zero_at_a)
            setup.pattern.star_fixed.push_back({iv.a, 1, true});
        else if (!bump_endpoint(setup.pattern.star_fixed, iv.a) &&
                 !bump_endpoint(setup.pattern.star_fixed, iv.b))
            throw Error(errc::construction_failed, "cannot balance the star knot pattern");
        star_budget -= 1;
    }
    if (upper_budget % 2 == 1) {
        if (!zero_at_a)
            setup.pattern.upper_fixed.push_back({iv.a, 1, true});
        else if (!bump_endpoint(setup.pattern.upper_fixed, iv.a) &&
                 !bump_endpoint(setup.pattern.upper_fixed, iv.b))
            throw Error(errc::construction_failed, "cannot balance the upper knot pattern");
        upper_budget -= 1;
    }
    setup.pattern.star_free = star_budget / 2;
    setup.pattern.upper_free = upper_budget / 2;
    setup.star_first = n % 2 == 0;
    setup.free_total = setup.pattern.star_free + setup.pattern.upper_free;

    // start the free knots away from the pinned zeros
    std::vector<double> blockers{iv.a, iv.b};
    for (const Knot& k : pinned) blockers.push_back(k.location);
    std::sort(blockers.begin(), blockers.end());
    std::vector<double> init;
    {
        std::vector<double> walls = blockers;
        for (int c = 0; c < setup.free_total; ++c) {
            std::size_t best = 0;
            double width = -1.0;
            for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
                if (walls[i + 1] - walls[i] > width) {
                    width = walls[i + 1] - walls[i];
                    best = i;
                }
            }
            const double t = 0.5 * (walls[best] + walls[best + 1]);
            init.push_back(t);
            walls.insert(walls.begin() + static_cast<std::ptrdiff_t>(best) + 1, t);
        }
        std::sort(init.begin(), init.end());
    }

    Decomposition d = solve_with_restarts(f, iv, setup, cfg, init);
    return d;
}

} // namespace sparsecert
