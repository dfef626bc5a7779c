#ifndef GWAVE_IFS_HPP
#define GWAVE_IFS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "gwave/error.hpp"
#include "gwave/word_algebra.hpp"

namespace gwave {

struct AffineMap {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return A * x + b; }
};

/// Contractive affine system with singular values of every A_i in [c1, c2].
struct AffineIFS {
    int dim = 1;
    std::vector<AffineMap> maps;
    double c1 = 0.0;
    double c2 = 0.0;

    int size() const { return static_cast<int>(maps.size()); }

    /// BAD_IFS unless 0 < c1 <= c2 < 1 and each A_i is d x d with singular values in [c1, c2].
    void validate() const {
        if (dim < 1) throw Error(ErrorCode::BadIfs, "dimension must be >= 1");
        if (maps.empty()) throw Error(ErrorCode::BadIfs, "no maps");
        if (!(c1 > 0.0 && c1 <= c2 && c2 < 1.0)) throw Error(ErrorCode::BadIfs, "need 0 < c1 <= c2 < 1");
        for (std::size_t i = 0; i < maps.size(); ++i) {
            const auto& m = maps[i];
            if (m.A.rows() != dim || m.A.cols() != dim || m.b.size() != dim)
                throw Error(ErrorCode::DimMismatch, "map " + std::to_string(i + 1) + " has the wrong shape");
            const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m.A).singularValues();
            if (sv.maxCoeff() > c2 + 1e-12 || sv.minCoeff() < c1 - 1e-12)
                throw Error(ErrorCode::BadIfs, "singular values of map " + std::to_string(i + 1) + " leave [c1, c2]");
        }
    }

    /// Fixed point of map i (1-based), the solution of (I - A_i) x = b_i.
    Eigen::VectorXd fixed_point(int i) const {
        const auto& m = maps.at(static_cast<std::size_t>(i - 1));
        return (Eigen::MatrixXd::Identity(dim, dim) - m.A).partialPivLu().solve(m.b);
    }
};

/// Uniform-scaling maps x -> s x + t_i; c1 = c2 = |s|.
inline AffineIFS similarity_ifs(int dim, double s, const std::vector<std::vector<double>>& shifts) {
    AffineIFS ifs;
    ifs.dim = dim;
    ifs.c1 = ifs.c2 = std::abs(s);
    for (const auto& t : shifts) {
        if (static_cast<int>(t.size()) != dim) throw Error(ErrorCode::DimMismatch, "shift has the wrong length");
        ifs.maps.push_back({s * Eigen::MatrixXd::Identity(dim, dim), Eigen::Map<const Eigen::VectorXd>(t.data(), dim)});
    }
    return ifs;
}

inline AffineIFS sierpinski_ifs() { return similarity_ifs(2, 0.5, {{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}}); }
inline AffineIFS cantor_ifs() { return similarity_ifs(1, 1.0 / 3.0, {{0.0}, {2.0 / 3.0}}); }

/// Points of R^d stored row-major.
struct PointCloud {
    int dim = 1;
    std::vector<double> coords;

    std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
    bool empty() const { return coords.empty(); }
    const double* point(std::size_t i) const { return coords.data() + i * static_cast<std::size_t>(dim); }
    Eigen::VectorXd vec(std::size_t i) const { return Eigen::Map<const Eigen::VectorXd>(point(i), dim); }
    void push(const Eigen::VectorXd& x) { coords.insert(coords.end(), x.data(), x.data() + x.size()); }
    void push(const double* x) { coords.insert(coords.end(), x, x + dim); }

    static PointCloud singleton(const Eigen::VectorXd& x) {
        PointCloud c{static_cast<int>(x.size()), {}};
        c.push(x);
        return c;
    }
};

namespace detail {

struct CellKeyHash {
    std::size_t operator()(const std::vector<long long>& k) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (long long v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Bucket grid over a point cloud for nearest-neighbour queries.
class NeighbourGrid {
public:
    explicit NeighbourGrid(const PointCloud& cloud) : cloud_(cloud) {
        const int d = cloud.dim;
        lo_.assign(static_cast<std::size_t>(d), std::numeric_limits<double>::infinity());
        std::vector<double> hi(static_cast<std::size_t>(d), -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < cloud.size(); ++i)
            for (int k = 0; k < d; ++k) {
                lo_[static_cast<std::size_t>(k)] = std::min(lo_[static_cast<std::size_t>(k)], cloud.point(i)[k]);
                hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], cloud.point(i)[k]);
            }
        double extent = 0.0;
        for (int k = 0; k < d; ++k) extent = std::max(extent, hi[static_cast<std::size_t>(k)] - lo_[static_cast<std::size_t>(k)]);
        side_ = std::max(1.0, std::ceil(std::pow(static_cast<double>(cloud.size()), 1.0 / d)));
        cell_ = extent > 0.0 ? extent / side_ : 1.0;
        for (std::size_t i = 0; i < cloud.size(); ++i) buckets_[key(cloud.point(i))].push_back(i);
    }

    /// Squared distance from x to the nearest cloud point.
    double nearest_sq(const double* x) const {
        const int d = cloud_.dim;
        const auto centre = key(x);
        double best = std::numeric_limits<double>::infinity();
        const auto max_ring = static_cast<long long>(side_) + 2;
        std::vector<long long> offset(static_cast<std::size_t>(d));
        // no occupied cell is closer than the overshoot past the key range
        long long first = 0;
        for (long long c : centre) first = std::max({first, -c, c - static_cast<long long>(side_)});
        for (long long r = first; r <= max_ring + first; ++r) {
            // a ring with more cells than the cloud has points is cheaper to replace by a full scan
            if (std::pow(2.0 * static_cast<double>(r) + 1.0, d) > 4.0 * static_cast<double>(cloud_.size())) break;
            // every cell within Chebyshev radius r whose own radius is exactly r
            for (auto& o : offset) o = -r;
            while (true) {
                long long ring = 0;
                for (auto o : offset) ring = std::max(ring, std::abs(o));
                if (ring == r) {
                    std::vector<long long> k = centre;
                    for (int j = 0; j < d; ++j) k[static_cast<std::size_t>(j)] += offset[static_cast<std::size_t>(j)];
                    auto it = buckets_.find(k);
                    if (it != buckets_.end())
                        for (std::size_t idx : it->second) best = std::min(best, dist_sq(x, cloud_.point(idx)));
                }
                int j = 0;
                while (j < d && offset[static_cast<std::size_t>(j)] == r) offset[static_cast<std::size_t>(j++)] = -r;
                if (j == d) break;
                ++offset[static_cast<std::size_t>(j)];
            }
            // cells beyond ring r are at least r * cell_ away
            const double reach = static_cast<double>(r) * cell_;
            if (best <= reach * reach) return best;
        }
        for (std::size_t i = 0; i < cloud_.size(); ++i) best = std::min(best, dist_sq(x, cloud_.point(i)));
        return best;
    }

private:
    std::vector<long long> key(const double* x) const {
        std::vector<long long> k(static_cast<std::size_t>(cloud_.dim));
        for (int j = 0; j < cloud_.dim; ++j)
            k[static_cast<std::size_t>(j)] = static_cast<long long>(std::floor((x[j] - lo_[static_cast<std::size_t>(j)]) / cell_));
        return k;
    }

    double dist_sq(const double* a, const double* b) const {
        double s = 0.0;
        for (int j = 0; j < cloud_.dim; ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
        return s;
    }

    const PointCloud& cloud_;
    std::vector<double> lo_;
    double side_ = 1.0;
    double cell_ = 1.0;
    std::unordered_map<std::vector<long long>, std::vector<std::size_t>, CellKeyHash> buckets_;
};

inline double directed_distance(const PointCloud& from, const PointCloud& to) {
    const NeighbourGrid grid(to);
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) worst = std::max(worst, grid.nearest_sq(from.point(i)));
    return std::sqrt(worst);
}

} // namespace detail

/// max of the two directed sup-min Euclidean distances.
inline double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance needs nonempty sets");
    if (a.dim != b.dim) throw Error(ErrorCode::DimMismatch, "point clouds of different dimension");
    return std::max(detail::directed_distance(a, b), detail::directed_distance(b, a));
}

/// min over pairs of Euclidean distance between the two sets.
inline double set_distance(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "set distance needs nonempty sets");
    const detail::NeighbourGrid grid(b);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) best = std::min(best, grid.nearest_sq(a.point(i)));
    return std::sqrt(best);
}

/// Replaces each point by the corner of its delta-cell, floor(x/delta) delta, and
/// drops duplicates. Order of first occurrence is kept.
inline PointCloud snap(const PointCloud& c, double delta) {
    if (delta <= 0.0) return c;
    PointCloud out{c.dim, {}};
    std::unordered_set<std::vector<long long>, detail::CellKeyHash> seen;
    std::vector<long long> k(static_cast<std::size_t>(c.dim));
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (int j = 0; j < c.dim; ++j)
            k[static_cast<std::size_t>(j)] = static_cast<long long>(std::floor(c.point(i)[j] / delta + 1e-9));
        if (!seen.insert(k).second) continue;
        for (int j = 0; j < c.dim; ++j) out.coords.push_back(static_cast<double>(k[static_cast<std::size_t>(j)]) * delta);
    }
    return out;
}

/// Phi(K) = union of phi_i(K), snapped to delta when delta > 0.
inline PointCloud hutchinson_step(const PointCloud& k, const AffineIFS& ifs, double delta = 0.0) {
    if (k.dim != ifs.dim) throw Error(ErrorCode::DimMismatch, "cloud and system dimensions differ");
    PointCloud out{k.dim, {}};
    out.coords.reserve(k.coords.size() * ifs.maps.size());
    for (const auto& m : ifs.maps)
        for (std::size_t i = 0; i < k.size(); ++i) out.push(m(k.vec(i)));
    return delta > 0.0 ? snap(out, delta) : out;
}

struct AttractorResult {
    PointCloud cloud;
    std::vector<double> distances;  // h(K_t, K_{t-1}), t = 1..iters
    std::vector<double> ratios;     // distances[t] / distances[t-1]; 0/0 counts as 0
    double delta = 0.0;
    double rate_bound = 0.0;  // c2 + 2 delta
    bool decay_ok = false;    // h_t <= c2 h_{t-1} + 2 delta sqrt(dim) at every step
};

/// Iterates Phi from {x0}, x0 defaulting to the fixed point of phi_1.
inline AttractorResult attractor(const AffineIFS& ifs, int iters, double delta = 0.0,
                                 const Eigen::VectorXd* x0 = nullptr) {
    ifs.validate();
    if (iters < 1) throw Error(ErrorCode::BadInput, "iters must be >= 1");
    AttractorResult res;
    res.delta = delta;
    res.rate_bound = ifs.c2 + 2.0 * delta;
    res.cloud = PointCloud::singleton(x0 ? *x0 : ifs.fixed_point(1));
    for (int t = 0; t < iters; ++t) {
        PointCloud next = hutchinson_step(res.cloud, ifs, delta);
        res.distances.push_back(hausdorff_distance(next, res.cloud));
        res.cloud = std::move(next);
    }
    res.decay_ok = true;
    const double slack = 2.0 * delta * std::sqrt(static_cast<double>(ifs.dim));
    for (std::size_t t = 1; t < res.distances.size(); ++t) {
        const double prev = res.distances[t - 1];
        const double r = prev == 0.0 ? (res.distances[t] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                     : res.distances[t] / prev;
        res.ratios.push_back(r);
        if (res.distances[t] > ifs.c2 * prev + slack + 1e-12) res.decay_ok = false;
    }
    return res;
}

/// Point pi(w) of the lifted attractor, approximated by phi_{w_1} o ... o phi_{w_k}(x0).
struct CodedPoint {
    Word prefix;
    Eigen::VectorXd anchor;
    int depth = 0;
    double radius = 0.0;  // c2^depth * radius of the base ball around x0
};

/// Radius of a ball around x0 containing the attractor: max_i |phi_i(x0) - x0| / (1 - c2).
inline double base_radius(const AffineIFS& ifs, const Eigen::VectorXd& x0) {
    double r = 0.0;
    for (const auto& m : ifs.maps) r = std::max(r, (m(x0) - x0).norm());
    return r / (1.0 - ifs.c2);
}

inline CodedPoint address_point(const Word& w, const AffineIFS& ifs, const Eigen::VectorXd& x0) {
    Eigen::VectorXd x = x0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (*it < 1 || *it > ifs.size())
            throw Error(ErrorCode::BadInput, "letter " + std::to_string(*it) + " outside 1.." + std::to_string(ifs.size()));
        x = ifs.maps[static_cast<std::size_t>(*it - 1)](x);
    }
    const int depth = static_cast<int>(w.size());
    return {w, x, depth, std::pow(ifs.c2, depth) * base_radius(ifs, x0)};
}

inline CodedPoint address_point(const Word& w, const AffineIFS& ifs) { return address_point(w, ifs, ifs.fixed_point(1)); }

/// Lifted branch (x, w) -> (phi_i(x), i w).
inline CodedPoint lift_apply(int i, const CodedPoint& p, const AffineIFS& ifs) {
    if (i < 1 || i > ifs.size()) throw Error(ErrorCode::BadInput, "branch index out of range");
    CodedPoint out;
    out.prefix = concat({i}, p.prefix);
    out.anchor = ifs.maps[static_cast<std::size_t>(i - 1)](p.anchor);
    out.depth = p.depth + 1;
    out.radius = p.radius * ifs.c2;
    return out;
}

/// Shift on codes: drops the first letter and recomputes the anchor from x0.
inline CodedPoint lifted_shift(const CodedPoint& p, const AffineIFS& ifs, const Eigen::VectorXd& x0) {
    if (p.prefix.empty()) throw Error(ErrorCode::EmptyCode, "cannot shift an empty code");
    return address_point(Word(p.prefix.begin() + 1, p.prefix.end()), ifs, x0);
}

inline CodedPoint lifted_shift(const CodedPoint& p, const AffineIFS& ifs) {
    return lifted_shift(p, ifs, ifs.fixed_point(1));
}

struct DisjointnessReport {
    int depth = 0;
    bool lifted_disjoint = true;  // branch ranges differ in the first code letter
    double unlifted_min_distance = 0.0;
    std::size_t points = 0;
};

/// Minimal distance between phi_i(K) and phi_j(K), i != j, on the depth-level
/// approximation K grown from the fixed points of all maps.
inline DisjointnessReport branch_disjointness(const AffineIFS& ifs, int depth) {
    ifs.validate();
    if (depth < 1) throw Error(ErrorCode::BadInput, "depth must be >= 1");
    PointCloud k{ifs.dim, {}};
    for (int i = 1; i <= ifs.size(); ++i) k.push(ifs.fixed_point(i));
    for (int t = 0; t < depth; ++t) k = hutchinson_step(k, ifs);
    std::vector<PointCloud> images;
    for (const auto& m : ifs.maps) {
        PointCloud img{ifs.dim, {}};
        for (std::size_t i = 0; i < k.size(); ++i) img.push(m(k.vec(i)));
        images.push_back(std::move(img));
    }
    DisjointnessReport rep;
    rep.depth = depth;
    rep.points = k.size();
    rep.unlifted_min_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            rep.unlifted_min_distance = std::min(rep.unlifted_min_distance, set_distance(images[i], images[j]));
    if (images.size() < 2) rep.unlifted_min_distance = 0.0;
    return rep;
}

} // namespace gwave

#endif // GWAVE_IFS_HPP
