#include "sparsecert/knots.hpp"

#include <cmath>

namespace sparsecert {

KnotSet::KnotSet(std::vector<Knot> entries, Interval interval)
    : entries_(std::move(entries)), interval_(interval) {
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i) {
        if (!(entries_[i].location < entries_[i + 1].location))
            throw Error(errc::shape_error, "knot locations must be strictly increasing");
    }
    for (const Knot& k : entries_) {
        if (k.multiplicity < 1 || k.multiplicity > 2)
            throw Error(errc::shape_error, "knot multiplicity must be 1 or 2");
        if (!interval_.contains(k.location))
            throw Error(errc::domain_error, "knot outside the interval");
        const bool on_boundary = interval_.is_halfline()
                                     ? k.location == 0.0
                                     : (k.location == interval_.a || k.location == interval_.b);
        if (k.endpoint) {
            if (!on_boundary)
                throw Error(errc::shape_error, "endpoint knot must sit on the boundary");
            if (k.multiplicity != 1)
                throw Error(errc::shape_error, "endpoint knot must have multiplicity 1");
        } else if (on_boundary) {
            throw Error(errc::shape_error, "boundary location must be flagged as endpoint");
        }
    }
}

int KnotSet::index() const noexcept {
    int s = 0;
    for (const Knot& k : entries_) s += k.endpoint ? 1 : 2;
    return s;
}

int KnotSet::row_count() const noexcept {
    int s = 0;
    for (const Knot& k : entries_) s += k.multiplicity;
    return s;
}

bool KnotSet::contains_location(double x, double tol) const noexcept {
    for (const Knot& k : entries_) {
        if (std::fabs(k.location - x) <= tol) return true;
    }
    return false;
}

std::vector<double> KnotSet::interior_locations() const {
    std::vector<double> r;
    for (const Knot& k : entries_) {
        if (!k.endpoint) r.push_back(k.location);
    }
    return r;
}

PointTuple KnotSet::to_point_tuple() const {
    std::vector<double> pts;
    for (const Knot& k : entries_) {
        for (int i = 0; i < k.multiplicity; ++i) pts.push_back(k.location);
    }
    return PointTuple(std::move(pts));
}

} // namespace sparsecert
