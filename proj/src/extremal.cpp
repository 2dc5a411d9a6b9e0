#include "sparsecert/extremal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sparsecert/alternant.hpp"

namespace sparsecert {

namespace {

constexpr double kDegenerateTol = 1e-12;

double probe_high(const Interval& iv, const SparsePolynomial& p) {
    if (!iv.is_halfline()) return iv.b;
    return std::max(1.0, 2.0 * halfline_dominance_bound(p));
}

// sup norm over a uniform probe grid of the knot-set interval
double probe_sup_norm(const SparsePolynomial& p, const Interval& iv, int points = 257) {
    const double hi = probe_high(iv, p);
    return sup_norm_on_grid(p, iv.left(), hi, points);
}

// sign of p at the grid argmax of |p|
int dominant_sign(const SparsePolynomial& p, const Interval& iv, int points = 257) {
    const double lo = iv.left();
    const double hi = probe_high(iv, p);
    double best = 0.0, val = 0.0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        const double v = eval(p, x);
        if (std::fabs(v) > best) {
            best = std::fabs(v);
            val = v;
        }
    }
    return val > 0.0 ? 1 : val < 0.0 ? -1 : 0;
}

double bisect_root(const SparsePolynomial& p, double lo, double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = eval(p, mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// polish a touch-point candidate: root of p' when it brackets, otherwise
// golden-section minimum of |p|
double polish_touch(const SparsePolynomial& p, double lo, double hi) {
    const double dlo = eval_derivative(p, lo, 1);
    const double dhi = eval_derivative(p, hi, 1);
    if (dlo == 0.0) return lo;
    if (dhi == 0.0) return hi;
    if ((dlo < 0.0) != (dhi < 0.0)) {
        double a = lo, b = hi, fa = dlo;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            const double fm = eval_derivative(p, mid, 1);
            if (fm == 0.0) return mid;
            if ((fa < 0.0) != (fm < 0.0)) {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        return 0.5 * (a + b);
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::fabs(eval(p, c)), fd = std::fabs(eval(p, d));
    for (int it = 0; it < 160; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = std::fabs(eval(p, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = std::fabs(eval(p, d));
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::vector<double> detpoly_coefficients(const FunctionFamily& fam,
                                         const std::vector<Knot>& knots) {
    const int n1 = static_cast<int>(fam.size());
    int rows = 0;
    for (const Knot& k : knots) rows += k.multiplicity;
    if (rows != n1 - 1)
        throw Error(errc::shape_error, "knot row count must equal the family order");

    Matrix r(rows, n1);
    int row = 0;
    for (const Knot& k : knots) {
        for (int d = 0; d < k.multiplicity; ++d, ++row) {
            for (int i = 0; i < n1; ++i)
                r(row, i) = fam.member_derivative(i, k.location, d);
        }
    }
    // scale rows; a vanishing row kills every minor
    for (int j = 0; j < rows; ++j) {
        const double norm = r.row(j).cwiseAbs().maxCoeff();
        if (norm == 0.0) return std::vector<double>(static_cast<std::size_t>(n1), 0.0);
        r.row(j) /= norm;
    }

    std::vector<double> coeffs(static_cast<std::size_t>(n1), 0.0);
    if (rows == 0) {
        coeffs[0] = 1.0; // single-member family, free row only
        return coeffs;
    }
    Matrix minor(rows, rows);
    for (int drop = 0; drop < n1; ++drop) {
        int c = 0;
        for (int i = 0; i < n1; ++i) {
            if (i == drop) continue;
            minor.col(c++) = r.col(i);
        }
        const double det = minor.determinant();
        coeffs[static_cast<std::size_t>(drop)] = ((drop % 2) == 0 ? 1.0 : -1.0) * det;
    }
    return coeffs;
}

SparsePolynomial interpolate(const FunctionFamily& fam,
                             const std::vector<double>& pts,
                             const std::vector<double>& vals) {
    if (pts.size() != fam.size() || vals.size() != fam.size())
        throw Error(errc::shape_error, "interpolation needs order + 1 nodes and values");
    std::vector<double> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    Matrix a = alternant_matrix(fam, PointTuple(sorted));
    // rebuild in caller order (alternant_matrix demands sorted distinct input)
    const int n1 = static_cast<int>(fam.size());
    Matrix m(n1, n1);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n1; ++i) m(j, i) = fam.member(i, pts[static_cast<std::size_t>(j)]);
    Vector y(n1);
    for (int j = 0; j < n1; ++j) y(j) = vals[static_cast<std::size_t>(j)];

    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw Error(errc::singular_system,
                    "alternant is singular: family is not a T-system at these nodes");
    Vector c = lu.solve(y);
    for (int j = 0; j < n1; ++j) {
        double fx = 0.0;
        for (int i = 0; i < n1; ++i) fx += c(i) * m(j, i);
        if (std::fabs(fx - y(j)) > 1e-9 * (1.0 + std::fabs(y(j))))
            throw Error(errc::singular_system, "interpolation residual above tolerance");
    }
    if (fam.kind() != FunctionFamily::Kind::powers)
        throw Error(errc::shape_error, "interpolate returns coefficients of a powers family");
    return SparsePolynomial(fam.power_exponents(),
                            std::vector<double>(c.data(), c.data() + n1));
}

SparsePolynomial poly_with_zeros(const FunctionFamily& fam, const KnotSet& ks,
                                 const Normalization& norm) {
    if (fam.kind() != FunctionFamily::Kind::powers)
        throw Error(errc::shape_error, "poly_with_zeros needs a powers family");
    auto coeffs = detpoly_coefficients(fam, ks.entries());
    double maxc = 0.0;
    for (double c : coeffs) maxc = std::max(maxc, std::fabs(c));
    if (maxc <= kDegenerateTol)
        throw Error(errc::degenerate_determinant,
                    "determinantal polynomial is identically zero (family not ET at a knot)");
    SparsePolynomial p(fam.power_exponents(), std::move(coeffs));

    switch (norm.kind) {
        case Normalization::Kind::unit_leading: {
            const double lead = p.leading_coefficient();
            if (std::fabs(lead) > kDegenerateTol * maxc) {
                p *= 1.0 / lead;
            } else {
                const double s = probe_sup_norm(p, ks.interval());
                p *= static_cast<double>(dominant_sign(p, ks.interval())) / s;
            }
            break;
        }
        case Normalization::Kind::sup_norm: {
            const double s = probe_sup_norm(p, ks.interval());
            const int sg = dominant_sign(p, ks.interval());
            p *= (sg == 0 ? 1.0 : sg) / s;
            break;
        }
        case Normalization::Kind::value_at: {
            const double v = eval(p, norm.x);
            if (std::fabs(v) <= kDegenerateTol * maxc)
                throw Error(errc::degenerate_determinant,
                            "normalization point is (numerically) a zero of the polynomial");
            p *= norm.value / v;
            break;
        }
        case Normalization::Kind::raw:
            p *= norm.scale;
            break;
    }

    // knots really are zeros, to the advertised tolerance
    const double sup = probe_sup_norm(p, ks.interval());
    for (const Knot& k : ks.entries()) {
        if (std::fabs(eval(p, k.location)) > 1e-8 * sup)
            throw Error(errc::construction_failed, "constructed polynomial misses a knot");
    }
    return p;
}

namespace {

// fresh interior locations for padding: midpoints (then thirds) of the
// widest free gaps between blockers
std::vector<double> pad_locations(double a, double b, std::vector<double> blockers,
                                  int count, int variant) {
    std::sort(blockers.begin(), blockers.end());
    std::vector<double> pads;
    std::vector<double> walls;
    walls.push_back(a);
    for (double t : blockers)
        if (t > a && t < b) walls.push_back(t);
    walls.push_back(b);
    const double frac = variant == 0 ? 0.5 : (variant == 1 ? 1.0 / 3.0 : 2.0 / 3.0);
    // repeatedly split the widest gap
    for (int k = 0; k < count; ++k) {
        std::size_t best = 0;
        double width = -1.0;
        for (std::size_t i = 0; i + 1 < walls.size(); ++i) {
            if (walls[i + 1] - walls[i] > width) {
                width = walls[i + 1] - walls[i];
                best = i;
            }
        }
        const double t = walls[best] + frac * (walls[best + 1] - walls[best]);
        pads.push_back(t);
        walls.insert(walls.begin() + static_cast<std::ptrdiff_t>(best) + 1, t);
    }
    std::sort(pads.begin(), pads.end());
    return pads;
}

std::vector<Knot> merge_sorted_knots(std::vector<Knot> v) {
    std::sort(v.begin(), v.end(),
              [](const Knot& x, const Knot& y) { return x.location < y.location; });
    return v;
}

} // namespace

SparsePolynomial nonneg_poly_with_zeros(const FunctionFamily& fam, const KnotSet& ks) {
    if (fam.kind() != FunctionFamily::Kind::powers)
        throw Error(errc::shape_error, "nonneg_poly_with_zeros needs a powers family");
    const int n = fam.order();
    if (ks.index() > n)
        throw Error(errc::index_too_large, "knot index exceeds the family order");
    const Interval iv = ks.interval();
    if (iv.is_halfline())
        throw Error(errc::domain_error, "nonneg_poly_with_zeros works on closed intervals");

    // realize interior knots as double zeros, endpoints as simple ones
    std::vector<Knot> base;
    bool have_a = false, have_b = false;
    for (const Knot& k : ks.entries()) {
        Knot kk = k;
        kk.multiplicity = k.endpoint ? 1 : 2;
        if (k.endpoint && k.location == iv.a) have_a = true;
        if (k.endpoint && k.location == iv.b) have_b = true;
        base.push_back(kk);
    }

    int deficit = n - ks.index();
    for (int variant = 0; variant < 3; ++variant) {
        std::vector<Knot> knots = base;
        int rest = deficit;
        if (rest % 2 == 1) {
            if (!have_b) {
                knots.push_back({iv.b, 1, true});
            } else if (!have_a) {
                knots.push_back({iv.a, 1, true});
            } else {
                // both endpoints pinned: deepen one of them to a double zero
                for (Knot& k : knots) {
                    if (k.endpoint && k.location == iv.b) {
                        k.multiplicity = 2;
                        break;
                    }
                }
            }
            rest -= 1;
        }
        std::vector<double> blockers;
        for (const Knot& k : knots) blockers.push_back(k.location);
        for (double t : pad_locations(iv.a, iv.b, blockers, rest / 2, variant))
            knots.push_back({t, 2, false});
        knots = merge_sorted_knots(std::move(knots));

        std::vector<double> coeffs;
        try {
            coeffs = detpoly_coefficients(fam, knots);
        } catch (const Error&) {
            continue;
        }
        double maxc = 0.0;
        for (double c : coeffs) maxc = std::max(maxc, std::fabs(c));
        if (maxc <= kDegenerateTol) continue;
        SparsePolynomial p(fam.power_exponents(), std::move(coeffs));
        const int sg = dominant_sign(p, iv);
        if (sg == 0) continue;
        p *= sg / probe_sup_norm(p, iv);

        // verify sign and interpolation of the requested zeros
        const int pts = 2048;
        double gmin = 0.0;
        for (int i = 0; i <= pts; ++i) {
            const double x = iv.a + (iv.b - iv.a) * static_cast<double>(i) / pts;
            gmin = std::min(gmin, eval(p, x));
        }
        bool hits = true;
        for (const Knot& k : ks.entries()) {
            if (std::fabs(eval(p, k.location)) > 1e-8) hits = false;
        }
        if (gmin >= -1e-9 && hits) return p;
    }
    throw Error(errc::construction_failed,
                "could not realize a nonnegative polynomial with the requested zeros");
}

SparsePolynomial poly_with_nodal_nonnodal(const FunctionFamily& fam, const Interval& iv,
                                          const std::vector<double>& nonnodal,
                                          const std::vector<double>& nodal) {
    if (fam.kind() != FunctionFamily::Kind::powers)
        throw Error(errc::shape_error, "poly_with_nodal_nonnodal needs a powers family");
    if (iv.is_halfline())
        throw Error(errc::domain_error, "poly_with_nodal_nonnodal works on closed intervals");
    const int n = fam.order();
    const int k = static_cast<int>(nonnodal.size());
    const int l = static_cast<int>(nodal.size());
    if (2 * k + l > n)
        throw Error(errc::index_too_large, "2k + l exceeds the family order");

    std::vector<double> all;
    for (double x : nonnodal) {
        if (x <= iv.a || x >= iv.b)
            throw Error(errc::domain_error, "non-nodal zeros must be interior");
        all.push_back(x);
    }
    for (double x : nodal) {
        if (!iv.contains(x))
            throw Error(errc::domain_error, "nodal zero outside the interval");
        all.push_back(x);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        if (all[i] == all[i + 1])
            throw Error(errc::shape_error, "zero locations must be pairwise distinct");
    }

    auto required_rows = [&]() {
        std::vector<Knot> rows;
        for (double x : nonnodal) rows.push_back({x, 2, false});
        for (double x : nodal)
            rows.push_back({x, 1, x == iv.a || x == iv.b});
        return rows;
    };

    const int deficit = n - 2 * k - l;
    const double span = iv.b - iv.a;

    auto build = [&](const std::vector<Knot>& rows) -> SparsePolynomial {
        auto coeffs = detpoly_coefficients(fam, merge_sorted_knots(rows));
        double maxc = 0.0;
        for (double c : coeffs) maxc = std::max(maxc, std::fabs(c));
        if (maxc <= kDegenerateTol)
            throw Error(errc::degenerate_determinant, "degenerate determinant");
        SparsePolynomial p(fam.power_exponents(), std::move(coeffs));
        p *= 1.0 / probe_sup_norm(p, iv);
        // fix sign on the region right of every zero
        double rightmost = iv.a;
        for (const Knot& r : rows) rightmost = std::max(rightmost, r.location);
        const double probe = rightmost >= iv.b ? iv.b : 0.5 * (rightmost + iv.b);
        double v = eval(p, probe);
        if (v == 0.0) v = eval(p, 0.75 * probe + 0.25 * iv.b);
        if (v == 0.0)
            throw Error(errc::construction_failed, "sign probe landed on a zero");
        if (v < 0.0) p *= -1.0;
        return p;
    };

    auto verify = [&](const SparsePolynomial& p) -> bool {
        const double sup = sup_norm_on_grid(p, iv.a, iv.b, 2048);
        if (sup == 0.0) return false;
        const double delta = std::max(span * 1e-4, 1e-12);
        for (double x : nodal) {
            if (std::fabs(eval(p, x)) > 1e-8 * sup) return false;
            if (x > iv.a && x < iv.b) {
                const double lft = eval(p, std::max(iv.a, x - delta));
                const double rgt = eval(p, std::min(iv.b, x + delta));
                if (!(lft * rgt < 0.0)) return false;
            }
        }
        for (double x : nonnodal) {
            if (std::fabs(eval(p, x)) > 1e-8 * sup) return false;
            const double lft = eval(p, std::max(iv.a, x - delta));
            const double rgt = eval(p, std::min(iv.b, x + delta));
            if (!(lft * rgt > 0.0)) return false;
        }
        // no stray sign changes between consecutive required zeros
        ZeroCount zc = count_zeros(p, iv);
        return zc.nodal == l && zc.nonnodal >= k;
    };

    for (int variant = 0; variant < 3; ++variant) {
        try {
            if (deficit == 0) {
                SparsePolynomial p = build(required_rows());
                if (verify(p)) return p;
                continue;
            }
            // pad with extra even-order zeros; odd deficits park one simple
            // zero at an endpoint of each summand so the sum stays clean there
            std::vector<Knot> rows1 = required_rows();
            std::vector<Knot> rows2 = required_rows();
            int rest = deficit;
            if (rest % 2 == 1) {
                rows1.push_back({iv.a, 1, true});
                rows2.push_back({iv.b, 1, true});
                rest -= 1;
            }
            std::vector<double> blockers = all;
            blockers.push_back(iv.a);
            blockers.push_back(iv.b);
            auto pads1 = pad_locations(iv.a, iv.b, blockers, rest / 2, variant);
            std::vector<double> blockers2 = blockers;
            blockers2.insert(blockers2.end(), pads1.begin(), pads1.end());
            auto pads2 = pad_locations(iv.a, iv.b, blockers2, rest / 2, (variant + 1) % 3);
            for (double t : pads1) rows1.push_back({t, 2, false});
            for (double t : pads2) rows2.push_back({t, 2, false});

            SparsePolynomial p1 = build(rows1);
            SparsePolynomial p2 = build(rows2);
            SparsePolynomial p = p1 + p2;
            if (verify(p)) return p;
            if (deficit % 2 == 0) {
                // a single padded determinant also works when parity allows
                if (verify(p1)) return p1;
            }
        } catch (const Error&) {
            continue;
        }
    }
    throw Error(errc::construction_failed,
                "could not realize the requested nodal/non-nodal zero pattern");
}

double halfline_dominance_bound(const SparsePolynomial& p) {
    const auto& e = p.exponents().values();
    const auto& c = p.coefficients();
    const std::size_t n = c.size() - 1;
    const double lead = std::fabs(c[n]);
    if (lead == 0.0) return 1.0;
    double bound = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0.0) continue;
        const double ratio = static_cast<double>(n) * std::fabs(c[i]) / lead;
        const double x = std::pow(std::max(ratio, 1e-30), 1.0 / (e[n] - e[i]));
        bound = std::max(bound, x);
    }
    return bound;
}

ZeroCount count_zeros(const SparsePolynomial& p, const Interval& iv,
                      const ZeroGridConfig& cfg) {
    double maxc = 0.0;
    for (double c : p.coefficients()) maxc = std::max(maxc, std::fabs(c));
    if (maxc == 0.0)
        throw Error(errc::identically_zero, "polynomial is identically zero");

    const double lo = iv.left();
    const double hi = iv.is_halfline() ? std::max(1.0, 2.0 * halfline_dominance_bound(p)) : iv.b;
    const int n = cfg.grid_points;
    std::vector<double> xs(static_cast<std::size_t>(n) + 1), fs(xs.size());
    double fsup = 0.0;
    for (int i = 0; i <= n; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / n;
        fs[static_cast<std::size_t>(i)] = eval(p, xs[static_cast<std::size_t>(i)]);
        fsup = std::max(fsup, std::fabs(fs[static_cast<std::size_t>(i)]));
    }
    if (fsup <= 1e-13 * maxc)
        throw Error(errc::identically_zero, "polynomial vanishes on the whole grid");

    const double tau = cfg.sign_rel_tol * fsup;
    auto sgn = [&](double v) { return v > tau ? 1 : (v < -tau ? -1 : 0); };

    std::vector<ClassifiedZero> zeros;
    auto add_zero = [&](double x, bool nodal) {
        const double merge_tol = 1e-9 * (hi - lo);
        for (auto& z : zeros) {
            if (std::fabs(z.location - x) <= merge_tol) return;
        }
        zeros.push_back({x, nodal});
    };

    // boundary zeros are nodal by definition
    if (sgn(fs.front()) == 0) add_zero(lo, true);
    const bool right_is_boundary = !iv.is_halfline();
    if (right_is_boundary && sgn(fs.back()) == 0) add_zero(hi, true);

    std::size_t i = 0;
    while (i + 1 < xs.size()) {
        const int si = sgn(fs[i]);
        if (si == 0) {
            ++i;
            continue;
        }
        // find next node with definite sign
        std::size_t j = i + 1;
        while (j < xs.size() && sgn(fs[j]) == 0) ++j;
        if (j == xs.size()) break;
        const int sj = sgn(fs[j]);
        if (j == i + 1) {
            if (si * sj < 0) add_zero(bisect_root(p, xs[i], xs[j], fs[i]), true);
        } else {
            // a run of below-threshold nodes between definite signs
            const double mid_lo = xs[i], mid_hi = xs[j];
            if (si * sj < 0) {
                add_zero(bisect_root(p, mid_lo, mid_hi, fs[i]), true);
            } else {
                const double x = polish_touch(p, mid_lo, mid_hi);
                if (std::fabs(eval(p, x)) <= cfg.touch_rel_tol * fsup &&
                    x > lo && (x < hi || !right_is_boundary))
                    add_zero(x, false);
            }
        }
        i = j;
    }

    // interior dips that never cross the sign deadband
    const double dip_gate = 1e-4 * fsup;
    for (std::size_t m = 1; m + 1 < xs.size(); ++m) {
        const double am = std::fabs(fs[m]);
        if (am > dip_gate) continue;
        if (am <= tau) continue; // handled above
        if (std::fabs(fs[m - 1]) < am || std::fabs(fs[m + 1]) < am) continue;
        if (sgn(fs[m - 1]) * sgn(fs[m + 1]) <= 0) continue;
        const double x = polish_touch(p, xs[m - 1], xs[m + 1]);
        if (std::fabs(eval(p, x)) <= cfg.touch_rel_tol * fsup && x > lo &&
            (x < hi || !right_is_boundary))
            add_zero(x, false);
    }

    std::sort(zeros.begin(), zeros.end(),
              [](const ClassifiedZero& a, const ClassifiedZero& b) {
                  return a.location < b.location;
              });
    ZeroCount out;
    out.zeros = std::move(zeros);
    for (const auto& z : out.zeros) (z.nodal ? out.nodal : out.nonnodal)++;
    return out;
}

} // namespace sparsecert
