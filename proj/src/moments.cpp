#include "sparsecert/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "sparsecert/alternant.hpp"

namespace sparsecert {

TruncatedMomentSequence::TruncatedMomentSequence(ExponentVector exps, std::vector<double> values)
    : exps_(std::move(exps)), values_(std::move(values)) {
    if (values_.size() != exps_.size())
        throw Error(errc::shape_error, "moment count must match exponent count");
}

double TruncatedMomentSequence::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::fabs(v));
    return m;
}

void AtomicMeasure::validate() const {
    if (atoms.size() != weights.size())
        throw Error(errc::shape_error, "atom and weight counts differ");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!(weights[i] > 0.0))
            throw Error(errc::shape_error, "atomic weights must be strictly positive");
        for (std::size_t j = i + 1; j < atoms.size(); ++j) {
            if (atoms[i] == atoms[j])
                throw Error(errc::shape_error, "atoms must be pairwise distinct");
        }
    }
}

double riesz(const TruncatedMomentSequence& s, const SparsePolynomial& p) {
    const auto& se = s.exponents().values();
    const auto& pe = p.exponents().values();
    const auto& pc = p.coefficients();
    double acc = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        while (k < se.size() && se[k] < pe[i]) ++k;
        if (k == se.size() || se[k] != pe[i])
            throw Error(errc::exponent_mismatch,
                        "polynomial exponent has no matching moment");
        acc += pc[i] * s.values()[k];
    }
    return acc;
}

TruncatedMomentSequence moments_of(const AtomicMeasure& mu, const ExponentVector& exps) {
    mu.validate();
    std::vector<double> vals(exps.size(), 0.0);
    for (std::size_t i = 0; i < exps.size(); ++i) {
        for (std::size_t j = 0; j < mu.atoms.size(); ++j)
            vals[i] += mu.weights[j] * power(mu.atoms[j], exps[i]);
    }
    return TruncatedMomentSequence(exps, std::move(vals));
}

// ---- Hankel criteria ------------------------------------------------------

namespace {

struct HankelPiece {
    bool defined = true;      // enough data for any statement at all
    bool psd = true;          // fully known block is PSD
    double min_eig = 0.0;
    bool border = false;      // the one-larger block has a single unknown corner
    bool range_ok = true;     // border column lies in the range of the block
    double range_residual = 0.0;
    double corner_floor = 0.0; // b^T A^+ b: smallest admissible corner value
};

// analysis of the Hankel matrix family of t_0..t_M (entries t_{i+j})
HankelPiece hankel_piece(const std::vector<double>& t) {
    HankelPiece out;
    const int M = static_cast<int>(t.size()) - 1;
    if (M < 0) {
        // nothing known: the empty block, corner floor 0
        out.border = true;
        return out;
    }
    const int k = M / 2; // largest full block is (k+1) x (k+1)
    Matrix a(k + 1, k + 1);
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) a(i, j) = t[static_cast<std::size_t>(i + j)];
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    const double scale = std::max({a.cwiseAbs().maxCoeff(), 1e-30});
    out.min_eig = es.eigenvalues().minCoeff();
    out.psd = out.min_eig >= -1e-10 * std::max(a.trace(), scale);

    // the (k+2)-block has exactly one unknown entry (its corner) iff
    // 2(k+1) = M + 1, i.e. M is odd
    if (M % 2 == 1) {
        out.border = true;
        Vector b(k + 1);
        for (int i = 0; i <= k; ++i) b(i) = t[static_cast<std::size_t>(i + k + 1)];
        // pseudo-inverse through the eigendecomposition
        const double lmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
        Vector proj = Vector::Zero(k + 1);
        double floor_val = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double lam = es.eigenvalues()(i);
            const double coef = es.eigenvectors().col(i).dot(b);
            if (lam > 1e-12 * lmax) {
                proj += coef * es.eigenvectors().col(i);
                floor_val += coef * coef / lam;
            }
        }
        out.range_residual = (b - proj).norm();
        out.range_ok = out.range_residual <= 1e-8 * std::max(b.norm(), scale);
        out.corner_floor = floor_val;
    }
    return out;
}

std::vector<double> shift_seq(const std::vector<double>& s, int by) {
    std::vector<double> t;
    for (std::size_t i = static_cast<std::size_t>(by); i < s.size(); ++i) t.push_back(s[i]);
    return t;
}

std::vector<double> one_minus_shift(const std::vector<double>& s) {
    std::vector<double> t;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) t.push_back(s[i] - s[i + 1]);
    return t;
}

std::vector<double> x2_minus_x(const std::vector<double>& s) {
    std::vector<double> t;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) t.push_back(s[i + 2] - s[i + 1]);
    return t;
}

HankelCheck combine(std::initializer_list<HankelPiece> pieces) {
    HankelCheck c;
    c.pass = true;
    c.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces) {
        c.pass = c.pass && p.psd && p.range_ok;
        c.min_eigenvalue = std::min(c.min_eigenvalue, p.min_eig);
        c.range_residual = std::max(c.range_residual, p.range_residual);
    }
    if (!std::isfinite(c.min_eigenvalue)) c.min_eigenvalue = 0.0;
    return c;
}

} // namespace

HankelReport hankel_psd_checks(const TruncatedMomentSequence& s) {
    const auto& e = s.exponents().values();
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] != static_cast<double>(i))
            throw Error(errc::not_dense, "hankel checks need dense exponents 0..n");
    }
    const auto& v = s.values();
    const int n = static_cast<int>(v.size()) - 1;

    HankelReport rep;
    HankelPiece ps = hankel_piece(v);
    HankelPiece px = hankel_piece(shift_seq(v, 1));
    HankelPiece p1mx = hankel_piece(one_minus_shift(v));
    HankelPiece px2x = hankel_piece(x2_minus_x(v));

    rep.hamburger = combine({ps});
    rep.stieltjes = combine({ps, px});
    rep.svecov = combine({ps, px2x});

    // Hausdorff: exact at the truncated level. Odd n: both localized
    // blocks are fully known. Even n: the next moment is a shared unknown
    // entering the Xs corner as +t and the (1-X)s corner as s_n - t, so
    // feasibility reduces to an interval test on t.
    rep.hausdorff = combine({px, p1mx});
    if (n % 2 == 0) {
        const double scale = std::max(1.0, s.sup_norm());
        if (px.border && p1mx.border) {
            const double t_min = px.corner_floor;
            const double t_max = v[static_cast<std::size_t>(n)] - p1mx.corner_floor;
            if (t_min > t_max + 1e-10 * scale) rep.hausdorff.pass = false;
        }
    }
    return rep;
}

// ---- sparse feasibility ---------------------------------------------------

namespace {

struct Shape {
    int lo = 0, hi = 0;   // member range of the exponent vector
    int doubles = 0;      // interior double knots (the free variables)
    bool use_a = false, use_b = false;
};

// sup-normalized nonnegative extremal polynomial of the shape at the
// given interior knots, as coefficients over the full exponent vector
struct ShapePoly {
    std::vector<double> coeffs;
    bool ok = false;
};

ShapePoly shape_poly(const ExponentVector& exps, const Shape& sh, const Interval& iv,
                     double probe_hi, const std::vector<double>& knots) {
    ShapePoly out;
    FunctionFamily full = FunctionFamily::powers(exps);
    FunctionFamily sub = (sh.lo == 0 && sh.hi == static_cast<int>(exps.size()) - 1)
                             ? full
                             : full.subfamily(sh.lo, sh.hi);
    std::vector<Knot> rows;
    if (sh.use_a) rows.push_back({iv.left(), 1, true});
    if (sh.use_b) rows.push_back({iv.b, 1, true});
    for (double x : knots) rows.push_back({x, 2, false});
    std::sort(rows.begin(), rows.end(),
              [](const Knot& a, const Knot& b) { return a.location < b.location; });
    std::vector<double> c;
    try {
        c = detpoly_coefficients(sub, rows);
    } catch (const Error&) {
        return out;
    }
    std::vector<double> fullc(exps.size(), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) fullc[static_cast<std::size_t>(sh.lo) + i] = c[i];

    SparsePolynomial p(exps, fullc);
    const double lo = iv.left();
    double best = 0.0, val = 0.0;
    for (int i = 0; i <= 256; ++i) {
        const double x = lo + (probe_hi - lo) * i / 256.0;
        const double v = eval(p, x);
        if (std::fabs(v) > best) {
            best = std::fabs(v);
            val = v;
        }
    }
    if (!(best > 1e-300)) return out;
    const double scale = (val < 0.0 ? -1.0 : 1.0) / best;
    for (double& x : fullc) x *= scale;
    out.coeffs = std::move(fullc);
    out.ok = true;
    return out;
}

struct ShapeMin {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> knots;
};

// deterministic global-ish minimization of the Riesz value over the
// ordered interior knots of one shape
ShapeMin minimize_shape(const TruncatedMomentSequence& s, const Shape& sh, const Interval& iv,
                        double knot_lo, double knot_hi, double probe_hi, bool log_scale,
                        const FeasibilityConfig& cfg) {
    const ExponentVector& exps = s.exponents();
    auto objective = [&](const std::vector<double>& knots) -> double {
        ShapePoly p = shape_poly(exps, sh, iv, probe_hi, knots);
        if (!p.ok) return std::numeric_limits<double>::infinity();
        double acc = 0.0;
        for (std::size_t i = 0; i < p.coeffs.size(); ++i) acc += p.coeffs[i] * s.values()[i];
        return acc;
    };
    auto place = [&](double t) {
        return log_scale ? knot_lo * std::pow(knot_hi / knot_lo, t)
                         : knot_lo + (knot_hi - knot_lo) * t;
    };

    ShapeMin best;
    const int d = sh.doubles;
    if (d == 0) {
        best.value = objective({});
        return best;
    }

    // coordinatewise refinement from the best coarse cell
    auto polish = [&](std::vector<double> t) {
        double width = 1.0 / (cfg.coarse_scan + 1);
        std::vector<double> knots(static_cast<std::size_t>(d));
        for (int round = 0; round < 40; ++round) {
            bool moved = false;
            for (int j = 0; j < d; ++j) {
                for (double dir : {-1.0, 1.0}) {
                    std::vector<double> tt = t;
                    tt[static_cast<std::size_t>(j)] =
                        std::clamp(tt[static_cast<std::size_t>(j)] + dir * width, 1e-6, 1.0 - 1e-6);
                    bool ordered = true;
                    for (int q = 0; q + 1 < d; ++q)
                        if (tt[static_cast<std::size_t>(q)] + 1e-9 >= tt[static_cast<std::size_t>(q) + 1])
                            ordered = false;
                    if (!ordered) continue;
                    for (int q = 0; q < d; ++q)
                        knots[static_cast<std::size_t>(q)] = place(tt[static_cast<std::size_t>(q)]);
                    const double v = objective(knots);
                    if (v < best.value) {
                        best.value = v;
                        best.knots = knots;
                        t = tt;
                        moved = true;
                    }
                }
            }
            if (!moved) width *= 0.5;
            if (width < 1e-12) break;
        }
    };

    if (d <= 2) {
        const int g = cfg.coarse_scan;
        std::vector<double> knots(static_cast<std::size_t>(d));
        std::vector<std::vector<double>> seeds;
        if (d == 1) {
            for (int i = 1; i <= g; ++i) {
                const double t = static_cast<double>(i) / (g + 1);
                knots[0] = place(t);
                const double v = objective(knots);
                if (v < best.value) {
                    best.value = v;
                    best.knots = knots;
                    seeds.assign(1, {t});
                }
            }
        } else {
            for (int i = 1; i <= g; ++i) {
                for (int j = i + 1; j <= g; ++j) {
                    const double ti = static_cast<double>(i) / (g + 1);
                    const double tj = static_cast<double>(j) / (g + 1);
                    knots[0] = place(ti);
                    knots[1] = place(tj);
                    const double v = objective(knots);
                    if (v < best.value) {
                        best.value = v;
                        best.knots = knots;
                        seeds.assign(1, {ti, tj});
                    }
                }
            }
        }
        if (!seeds.empty()) polish(seeds.front());
        return best;
    }

    // higher dimensional shapes: seeded multistart with the same polish
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    for (int trial = 0; trial < cfg.multistarts; ++trial) {
        std::vector<double> t(static_cast<std::size_t>(d));
        for (double& x : t) x = uni(rng);
        std::sort(t.begin(), t.end());
        bool ok = true;
        for (int q = 0; q + 1 < d; ++q)
            if (t[static_cast<std::size_t>(q)] + 1e-4 >= t[static_cast<std::size_t>(q) + 1]) ok = false;
        if (!ok) continue;
        std::vector<double> knots(static_cast<std::size_t>(d));
        for (int q = 0; q < d; ++q) knots[static_cast<std::size_t>(q)] = place(t[static_cast<std::size_t>(q)]);
        const double v = objective(knots);
        if (v < best.value) {
            best.value = v;
            best.knots = knots;
        }
        polish(t);
    }
    return best;
}

} // namespace

FeasibilityVerdict sparse_feasible(const TruncatedMomentSequence& s, const Interval& iv,
                                   const FeasibilityConfig& cfg) {
    const ExponentVector& exps = s.exponents();
    iv.require_admissible(exps);
    if (iv.left() == 0.0 && exps[0] != 0.0)
        throw Error(errc::config_error, "a = 0 requires alpha_0 = 0 in the exponent vector");
    if (iv.is_halfline() && exps.has_negative())
        throw Error(errc::config_error, "half-line feasibility needs nonnegative exponents");

    const int n = exps.order();
    const double snorm = s.sup_norm();
    const double band = cfg.marginal_band > 0.0 ? cfg.marginal_band : 1e-8 * (1.0 + snorm);
    const double floor_tol = 1e-12 * (1.0 + snorm);

    std::vector<Shape> shapes;
    if (!iv.is_halfline()) {
        const int m = n / 2;
        if (n == 0) {
            shapes.push_back({0, 0, 0, false, false});
        } else if (n % 2 == 0) {
            shapes.push_back({0, n, m, false, false});
            shapes.push_back({0, n, m - 1, true, true});
        } else {
            shapes.push_back({0, n, m, true, false});
            shapes.push_back({0, n, m, false, true});
        }
    } else {
        // all families the truncation permits
        for (int mm = 0; 2 * mm <= n; ++mm) shapes.push_back({0, 2 * mm, mm, false, false});
        for (int mm = 1; 2 * mm - 1 <= n; ++mm)
            shapes.push_back({1, 2 * mm - 1, mm - 1, false, false});
        for (int mm = 0; 2 * mm + 1 <= n; ++mm)
            shapes.push_back({1, 2 * mm + 1, mm, false, false});
    }

    double knot_lo, knot_hi, probe_hi;
    bool log_scale = iv.is_halfline();
    if (!iv.is_halfline()) {
        knot_lo = iv.a;
        knot_hi = iv.b;
        probe_hi = iv.b;
    } else {
        // characteristic scale from the moments themselves
        double scale = 1.0;
        if (s.values()[0] > 0.0 && s.values().back() > 0.0 && exps.max_exponent() > 0.0)
            scale = std::pow(s.values().back() / s.values()[0], 1.0 / exps.max_exponent());
        knot_lo = 1e-4 * scale;
        knot_hi = 32.0 * scale;
        probe_hi = 64.0 * scale;
    }

    FeasibilityVerdict verdict;
    verdict.min_value = std::numeric_limits<double>::infinity();
    Shape best_shape;
    std::vector<double> best_knots;
    for (const Shape& sh : shapes) {
        ShapeMin m = minimize_shape(s, sh, iv, knot_lo, knot_hi, probe_hi, log_scale, cfg);
        if (m.value < verdict.min_value) {
            verdict.min_value = m.value;
            best_shape = sh;
            best_knots = m.knots;
        }
    }
    if (!std::isfinite(verdict.min_value))
        throw Error(errc::config_error, "no extremal family could be evaluated");

    if (verdict.min_value < -band)
        verdict.kind = FeasibilityKind::infeasible;
    else if (verdict.min_value < -floor_tol)
        verdict.kind = FeasibilityKind::marginal;
    else
        verdict.kind = FeasibilityKind::feasible;

    if (verdict.kind == FeasibilityKind::infeasible) {
        ShapePoly p = shape_poly(exps, best_shape, iv, probe_hi, best_knots);
        if (p.ok) {
            SparsePolynomial w(exps, p.coeffs);
            double gmin = std::numeric_limits<double>::infinity();
            const double lo = iv.left();
            for (int i = 0; i <= 4096; ++i) {
                const double x = lo + (probe_hi - lo) * i / 4096.0;
                gmin = std::min(gmin, eval(w, x));
            }
            verdict.witness_grid_min = gmin;
            verdict.witness = std::move(w);
        }
    }
    return verdict;
}

// ---- atomic recovery ------------------------------------------------------

namespace {

// Lawson-Hanson style nonnegative least squares
Vector nnls(const Matrix& a, const Vector& b, int max_iter = 600) {
    const int cols = static_cast<int>(a.cols());
    Vector x = Vector::Zero(cols);
    std::vector<bool> active(static_cast<std::size_t>(cols), false);
    const double tol = 1e-12 * std::max(1.0, b.norm());

    for (int iter = 0; iter < max_iter; ++iter) {
        Vector grad = a.transpose() * (b - a * x);
        int pick = -1;
        double best = tol;
        for (int j = 0; j < cols; ++j) {
            if (!active[static_cast<std::size_t>(j)] && grad(j) > best) {
                best = grad(j);
                pick = j;
            }
        }
        if (pick < 0) break;
        active[static_cast<std::size_t>(pick)] = true;

        for (int inner = 0; inner < max_iter; ++inner) {
            std::vector<int> idx;
            for (int j = 0; j < cols; ++j)
                if (active[static_cast<std::size_t>(j)]) idx.push_back(j);
            Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
            for (std::size_t k = 0; k < idx.size(); ++k)
                ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
            Vector z = ap.colPivHouseholderQr().solve(b);
            bool all_pos = true;
            for (Eigen::Index k = 0; k < z.size(); ++k)
                if (z(k) <= 0.0) all_pos = false;
            if (all_pos) {
                x.setZero();
                for (std::size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(static_cast<Eigen::Index>(k));
                break;
            }
            // shrink toward the feasible boundary
            double alpha = 1.0;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const double zi = z(static_cast<Eigen::Index>(k));
                const double xi = x(idx[k]);
                if (zi <= 0.0 && xi - zi > 0.0) alpha = std::min(alpha, xi / (xi - zi));
            }
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const double zi = z(static_cast<Eigen::Index>(k));
                const double xi = x(idx[k]);
                const double nv = xi + alpha * (zi - xi);
                x(idx[k]) = nv;
                if (nv <= 1e-14) active[static_cast<std::size_t>(idx[k])] = false;
            }
        }
    }
    return x;
}

} // namespace

AtomicMeasure recover_atoms(const TruncatedMomentSequence& s, const Interval& iv,
                            const RecoveryConfig& cfg) {
    FeasibilityVerdict fv = sparse_feasible(s, iv);
    if (fv.infeasible())
        throw Error(errc::infeasible, "sequence is not a truncated moment sequence on the set");

    const ExponentVector& exps = s.exponents();
    const int n1 = static_cast<int>(exps.size());
    const double snorm = s.sup_norm();
    if (snorm == 0.0) return AtomicMeasure{}; // the zero measure

    double lo = iv.left(), hi;
    if (!iv.is_halfline()) {
        hi = iv.b;
    } else {
        double scale = 1.0;
        if (s.values()[0] > 0.0 && s.values().back() > 0.0 && exps.max_exponent() > 0.0)
            scale = std::pow(s.values().back() / s.values()[0], 1.0 / exps.max_exponent());
        hi = 32.0 * scale;
    }

    // grid-supported NNLS localization
    const int g = cfg.grid_points;
    std::vector<double> grid(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (g - 1);
    Matrix a(n1, g);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < n1; ++i)
            a(i, j) = power(grid[static_cast<std::size_t>(j)], exps[static_cast<std::size_t>(i)]);
    Vector b(n1);
    for (int i = 0; i < n1; ++i) b(i) = s.values()[static_cast<std::size_t>(i)];
    // column scaling keeps the active-set solves well conditioned
    Vector colscale(g);
    for (int j = 0; j < g; ++j) {
        colscale(j) = std::max(a.col(j).norm(), 1e-30);
        a.col(j) /= colscale(j);
    }
    Vector w = nnls(a, b);
    for (int j = 0; j < g; ++j) w(j) /= colscale(j);

    // weighted quantiles of the NNLS mass distribution: initial support
    // of a k-atom candidate
    auto quantile_atoms = [&](int k, double shift) {
        double total = 0.0;
        for (int j = 0; j < g; ++j) total += w(j);
        std::vector<double> at(static_cast<std::size_t>(k));
        for (int q = 0; q < k; ++q) {
            const double target = total * std::clamp((q + 0.5 + shift) / k, 0.01, 0.99);
            double cum = 0.0;
            double x = grid.back();
            for (int j = 0; j < g; ++j) {
                cum += w(j);
                if (cum >= target) {
                    x = grid[static_cast<std::size_t>(j)];
                    break;
                }
            }
            at[static_cast<std::size_t>(q)] = x;
        }
        // de-collide
        for (int q = 1; q < k; ++q)
            if (at[static_cast<std::size_t>(q)] <= at[static_cast<std::size_t>(q) - 1])
                at[static_cast<std::size_t>(q)] =
                    at[static_cast<std::size_t>(q) - 1] + 1e-3 * (hi - lo);
        return at;
    };

    // weights for fixed atoms, by small nonnegative least squares
    auto weights_for = [&](const std::vector<double>& at) {
        const int k = static_cast<int>(at.size());
        Matrix ak(n1, k);
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < n1; ++i)
                ak(i, j) = power(at[static_cast<std::size_t>(j)], exps[static_cast<std::size_t>(i)]);
        Vector wk = nnls(ak, b);
        return std::vector<double>(wk.data(), wk.data() + k);
    };

    auto residual_inf = [&](const std::vector<double>& at, const std::vector<double>& wt) {
        double worst = 0.0;
        for (int i = 0; i < n1; ++i) {
            double acc = 0.0;
            for (std::size_t j2 = 0; j2 < at.size(); ++j2)
                acc += wt[j2] * power(at[j2], exps[static_cast<std::size_t>(i)]);
            worst = std::max(worst, std::fabs(acc - s.values()[static_cast<std::size_t>(i)]));
        }
        return worst;
    };

    auto residual_two = [&](const std::vector<double>& at, const std::vector<double>& wt) {
        double acc2 = 0.0;
        for (int i = 0; i < n1; ++i) {
            double acc = 0.0;
            for (std::size_t j2 = 0; j2 < at.size(); ++j2)
                acc += wt[j2] * power(at[j2], exps[static_cast<std::size_t>(i)]);
            const double d = acc - s.values()[static_cast<std::size_t>(i)];
            acc2 += d * d;
        }
        return std::sqrt(acc2);
    };

    // variable-projection refinement: atoms by Levenberg-Marquardt with
    // the weights re-solved at every step
    auto refine = [&](std::vector<double> at) -> std::pair<std::vector<double>, std::vector<double>> {
        std::vector<double> wt = weights_for(at);
        double cur = residual_two(at, wt);
        double step_scale = 0.05 * (hi - lo);
        for (int iter = 0; iter < cfg.refine_iterations; ++iter) {
            const int k = static_cast<int>(at.size());
            Matrix jac(n1, k);
            Vector r(n1);
            for (int i = 0; i < n1; ++i) {
                double acc = 0.0;
                for (int j = 0; j < k; ++j)
                    acc += wt[static_cast<std::size_t>(j)] *
                           power(at[static_cast<std::size_t>(j)], exps[static_cast<std::size_t>(i)]);
                r(i) = acc - s.values()[static_cast<std::size_t>(i)];
            }
            for (int j = 0; j < k; ++j) {
                const double x = at[static_cast<std::size_t>(j)];
                const double c = wt[static_cast<std::size_t>(j)];
                for (int i = 0; i < n1; ++i) {
                    const double e = exps[static_cast<std::size_t>(i)];
                    double dx = 0.0;
                    if (x > 0.0 || (e >= 1.0 && x == 0.0)) dx = c * power_derivative(x, e, 1);
                    jac(i, j) = dx;
                }
            }
            Matrix jtj = jac.transpose() * jac;
            Vector jtr = jac.transpose() * r;
            bool advanced = false;
            double lambda = 1e-8;
            for (int attempt = 0; attempt < 20; ++attempt) {
                Matrix m = jtj;
                for (int d2 = 0; d2 < k; ++d2) m(d2, d2) += lambda * (jtj(d2, d2) + 1e-14);
                Vector step = m.ldlt().solve(-jtr);
                std::vector<double> at2 = at;
                for (int j = 0; j < k; ++j) {
                    double sj = step(j);
                    sj = std::clamp(sj, -8.0 * step_scale, 8.0 * step_scale);
                    at2[static_cast<std::size_t>(j)] =
                        std::clamp(at2[static_cast<std::size_t>(j)] + sj, lo, hi);
                }
                std::vector<double> wt2 = weights_for(at2);
                const double res2 = residual_two(at2, wt2);
                if (res2 < cur) {
                    at = at2;
                    wt = wt2;
                    cur = res2;
                    advanced = true;
                    break;
                }
                lambda *= 10.0;
            }
            if (!advanced || cur <= 0.02 * cfg.residual_rel_tol * (1.0 + snorm)) break;
        }
        return {at, wt};
    };

    const double tol = cfg.residual_rel_tol * (1.0 + snorm);
    const double prune = cfg.weight_prune * (1.0 + snorm);
    double best_res = std::numeric_limits<double>::infinity();

    auto finalize = [&](std::vector<double> at, std::vector<double> wt,
                        AtomicMeasure& out) -> bool {
        // prune negligible weights, merge collided atoms, re-solve weights
        std::vector<double> at2;
        for (std::size_t j = 0; j < at.size(); ++j) {
            if (wt[j] <= prune) continue;
            bool merged = false;
            for (double& x : at2) {
                if (std::fabs(x - at[j]) <= 1e-9 * (hi - lo)) merged = true;
            }
            if (!merged) at2.push_back(at[j]);
        }
        std::sort(at2.begin(), at2.end());
        if (at2.empty()) return false;
        std::vector<double> wt2 = weights_for(at2);
        std::vector<double> at3, wt3;
        for (std::size_t j = 0; j < at2.size(); ++j) {
            if (wt2[j] > prune) {
                at3.push_back(at2[j]);
                wt3.push_back(wt2[j]);
            }
        }
        if (at3.empty()) return false;
        const double res = residual_inf(at3, wt3);
        best_res = std::min(best_res, res);
        if (res > tol) return false;
        out = AtomicMeasure{at3, wt3};
        return true;
    };

    // deterministic coarse scan over ordered atom tuples, weights by NNLS
    auto scan_seeds = [&](int k) {
        std::vector<std::vector<double>> seeds;
        const int sg = k == 1 ? 96 : (k == 2 ? 40 : 18);
        std::vector<double> coarse(static_cast<std::size_t>(sg));
        for (int i = 0; i < sg; ++i)
            coarse[static_cast<std::size_t>(i)] =
                lo + (hi - lo) * (i + 0.5) / sg;
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::vector<std::pair<double, std::vector<double>>> ranked;
        while (true) {
            std::vector<double> at(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i)
                at[static_cast<std::size_t>(i)] = coarse[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
            ranked.emplace_back(residual_inf(at, weights_for(at)), at);
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] >= sg - (k - pos)) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < k; ++i)
                idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i) - 1] + 1;
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < ranked.size() && i < 3; ++i) seeds.push_back(ranked[i].second);
        return seeds;
    };

    // smallest support first
    const int k_max = std::min(n1, g);
    for (int k = 1; k <= k_max; ++k) {
        std::vector<std::vector<double>> inits;
        if (k <= 3) {
            for (auto& sd : scan_seeds(k)) inits.push_back(std::move(sd));
        }
        for (double shift : {0.0, -0.25, 0.25}) inits.push_back(quantile_atoms(k, shift));
        for (const auto& init : inits) {
            auto [at, wt] = refine(init);
            AtomicMeasure mu{};
            if (finalize(at, wt, mu)) {
                mu.validate();
                return mu;
            }
        }
    }
    throw RecoveryFailedError("atom recovery residual above tolerance", best_res);
}

std::vector<double> signed_representation(const TruncatedMomentSequence& s,
                                          const std::vector<double>& pts) {
    const ExponentVector& exps = s.exponents();
    if (pts.size() != exps.size())
        throw Error(errc::shape_error, "need exactly order + 1 nodes");
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i] == pts[j])
                throw Error(errc::shape_error, "nodes must be pairwise distinct");

    const int n1 = static_cast<int>(exps.size());
    Matrix m(n1, n1); // m(i, j) = x_j^{alpha_i}
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
            m(i, j) = power(pts[static_cast<std::size_t>(j)], exps[static_cast<std::size_t>(i)]);
    Vector b(n1);
    for (int i = 0; i < n1; ++i) b(i) = s.values()[static_cast<std::size_t>(i)];
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw Error(errc::singular_system, "alternant system at these nodes is singular");
    Vector w = lu.solve(b);
    if ((m * w - b).norm() > 1e-9 * std::max(1.0, b.norm()))
        throw Error(errc::singular_system, "signed representation residual above tolerance");
    return std::vector<double>(w.data(), w.data() + n1);
}

} // namespace sparsecert
