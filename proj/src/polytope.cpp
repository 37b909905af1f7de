#include "torifano/polytope.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <set>

namespace torifano {

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::FanSupport: return "fan-support";
        case Provenance::Raw: return "raw";
        case Provenance::Minkowski: return "minkowski";
        case Provenance::Lifted: return "lifted";
        case Provenance::Translate: return "translate";
    }
    return "unknown";
}

std::string to_string(Ampleness a) {
    switch (a) {
        case Ampleness::Ample: return "Ample";
        case Ampleness::NefOnly: return "NefOnly";
        case Ampleness::NotConvex: return "NotConvex";
    }
    return "unknown";
}

bool Polytope::contains(std::span<const Rational> x) const {
    return std::all_of(halfspaces.begin(), halfspaces.end(), [&](const Halfspace& h) { return h.contains(x); });
}

std::size_t Polytope::redundant_count() const {
    return static_cast<std::size_t>(std::count(redundant.begin(), redundant.end(), true));
}

namespace {

void sort_unique(std::vector<QVector>& pts) {
    std::sort(pts.begin(), pts.end(), [](const QVector& a, const QVector& b) { return lex_less(a, b); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

void check_support_length(const Fan& fan, std::span<const Rational> c) {
    if (c.size() != fan.ray_count())
        throw InputError("support vector has " + std::to_string(c.size()) + " entries, fan has " +
                         std::to_string(fan.ray_count()) + " rays");
}

std::vector<Halfspace> fan_halfspaces(const Fan& fan, std::span<const Rational> c) {
    std::vector<Halfspace> hs;
    hs.reserve(fan.ray_count());
    for (std::size_t j = 0; j < fan.ray_count(); ++j) hs.push_back({fan.ray(j), c[j]});
    return hs;
}

// Visits every k-subset of {0..m-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t m, std::size_t k, F&& visit) {
    if (k > m) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        visit(std::as_const(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

void finalize_polytope(Polytope& p) {
    const auto n = static_cast<std::size_t>(p.dimension);
    sort_unique(p.vertices);
    if (affine_dimension(p.vertices) != p.dimension)
        throw DegenerateError("polytope is not full-dimensional (empty interior)");
    p.redundant.assign(p.halfspaces.size(), false);
    std::set<std::vector<std::size_t>> facet_sets;
    for (std::size_t j = 0; j < p.halfspaces.size(); ++j) {
        std::vector<QVector> tight;
        std::vector<std::size_t> tight_idx;
        for (std::size_t v = 0; v < p.vertices.size(); ++v) {
            if (!p.halfspaces[j].contains(p.vertices[v]))
                throw Error("internal: vertex violates halfspace " + std::to_string(j));
            if (p.halfspaces[j].is_tight(p.vertices[v])) {
                tight.push_back(p.vertices[v]);
                tight_idx.push_back(v);
            }
        }
        const bool facet = affine_dimension(tight) == static_cast<int>(n) - 1;
        // a repeated halfspace only counts once
        p.redundant[j] = !facet || !facet_sets.insert(tight_idx).second;
    }
}

std::vector<QVector> cone_vertices(const Fan& fan, std::span<const Rational> c) {
    check_support_length(fan, c);
    std::vector<QVector> out;
    out.reserve(fan.max_cones.size());
    for (const auto& cone : fan.max_cones) {
        QMatrix rows;
        QVector rhs;
        for (int j : cone) {
            rows.push_back(fan.ray(j));
            rhs.push_back(-c[j]);
        }
        auto v = solve_linear(std::move(rows), std::move(rhs));
        if (!v) throw InputError("singular maximal cone; fan must be simplicial and full-dimensional");
        out.push_back(std::move(*v));
    }
    return out;
}

AmplenessReport ampleness_class(const Fan& fan, std::span<const Rational> c) {
    const auto verts = cone_vertices(fan, c);
    AmplenessReport report;
    bool equality = false;
    for (std::size_t s = 0; s < fan.max_cones.size(); ++s) {
        const auto& cone = fan.max_cones[s];
        for (std::size_t j = 0; j < fan.ray_count(); ++j) {
            if (std::find(cone.begin(), cone.end(), static_cast<int>(j)) != cone.end()) continue;
            const Rational lhs = dot(fan.ray(j), verts[s]);
            if (lhs < -c[j]) {
                report.kind = Ampleness::NotConvex;
                report.cone = static_cast<int>(s);
                report.ray = static_cast<int>(j);
                report.witness = "vertex of cone " + std::to_string(s) + " violates ray " + std::to_string(j) + ": " +
                                 to_string(lhs) + " < " + to_string(Rational(-c[j]));
                return report;
            }
            if (lhs == -c[j] && !equality) {
                equality = true;
                report.cone = static_cast<int>(s);
                report.ray = static_cast<int>(j);
                report.witness = "vertex of cone " + std::to_string(s) + " is tight on ray " + std::to_string(j);
            }
        }
    }
    report.kind = equality ? Ampleness::NefOnly : Ampleness::Ample;
    return report;
}

Polytope polytope_from_support(const Fan& fan, std::span<const Rational> c) {
    check_fan_input(fan);
    const auto amp = ampleness_class(fan, c);
    if (amp.kind == Ampleness::NotConvex) {
        Polytope p = polytope_from_halfspaces(fan_halfspaces(fan, c), fan.dimension);
        p.provenance = Provenance::FanSupport;
        return p;
    }
    Polytope p;
    p.dimension = fan.dimension;
    p.halfspaces = fan_halfspaces(fan, c);
    p.vertices = cone_vertices(fan, c);
    p.provenance = Provenance::FanSupport;
    finalize_polytope(p);
    return p;
}

Polytope polytope_from_halfspaces(std::vector<Halfspace> halfspaces, int dimension) {
    if (dimension <= 0) throw InputError("dimension must be positive");
    if (dimension > 6) throw InputError("halfspace enumeration supports dimension <= 6");
    if (halfspaces.size() > 32) throw InputError("halfspace enumeration supports at most 32 halfspaces");
    const auto n = static_cast<std::size_t>(dimension);
    for (std::size_t j = 0; j < halfspaces.size(); ++j)
        if (halfspaces[j].normal.size() != n)
            throw InputError("halfspace " + std::to_string(j) + " normal has wrong length");

    Polytope p;
    p.dimension = dimension;
    p.halfspaces = std::move(halfspaces);
    p.provenance = Provenance::Raw;
    const auto m = p.halfspaces.size();

    for_each_subset(m, n, [&](const std::vector<std::size_t>& idx) {
        QMatrix rows;
        QVector rhs;
        for (auto j : idx) {
            rows.push_back(p.halfspaces[j].normal);
            rhs.push_back(-p.halfspaces[j].offset);
        }
        auto x = solve_linear(std::move(rows), std::move(rhs));
        if (x && p.contains(*x)) p.vertices.push_back(std::move(*x));
    });

    QMatrix normals;
    for (const auto& h : p.halfspaces) normals.push_back(h.normal);
    if (normals.empty() || rank(normals) < n) {
        if (p.vertices.empty()) throw UnboundedPolytopeError("normals do not span: polyhedron contains a line or is empty");
        throw UnboundedPolytopeError("normals do not span: polyhedron contains a line");
    }
    if (p.vertices.empty()) throw EmptyPolytopeError("no feasible vertex: halfspaces have empty intersection");

    // pointed recession cone {r : <d_j, r> >= 0}: extreme rays are tight on n-1 independent rows
    for_each_subset(m, n - 1, [&](const std::vector<std::size_t>& idx) {
        QMatrix rows;
        for (auto j : idx) rows.push_back(p.halfspaces[j].normal);
        const auto ns = null_space(rows, n);
        if (ns.size() != 1) return;
        for (int sign : {1, -1}) {
            const QVector r = scale(ns[0], Rational(sign));
            const bool recedes = std::all_of(p.halfspaces.begin(), p.halfspaces.end(),
                                             [&](const Halfspace& h) { return dot(h.normal, r) >= 0; });
            if (recedes) {
                std::string dir;
                for (std::size_t i = 0; i < r.size(); ++i) dir += (i ? "," : "") + to_string(r[i]);
                throw UnboundedPolytopeError("recession direction (" + dir + ")");
            }
        }
    });

    finalize_polytope(p);
    return p;
}

bool vertex_sums_match(const std::vector<Polytope>& parts, const Polytope& sum) {
    if (parts.empty()) return false;
    std::vector<QVector> sums = parts.front().vertices;
    for (std::size_t k = 1; k < parts.size(); ++k) {
        std::vector<QVector> next;
        for (const auto& a : sums)
            for (const auto& b : parts[k].vertices) next.push_back(add(a, b));
        sort_unique(next);
        sums = std::move(next);
    }
    for (const auto& s : sums)
        if (!sum.contains(s)) return false;
    // every vertex of the sum is itself a vertex sum
    for (const auto& v : sum.vertices)
        if (!std::binary_search(sums.begin(), sums.end(), v, [](const QVector& a, const QVector& b) { return lex_less(a, b); }))
            return false;
    return true;
}

MinkowskiResult minkowski_sum(const Fan& fan, const std::vector<QVector>& parts) {
    if (parts.empty()) throw InputError("minkowski_sum needs at least one part");
    QVector total(fan.ray_count(), Rational(0));
    std::vector<Polytope> polys;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].size() != fan.ray_count())
            throw InputError("part " + std::to_string(i) + " does not match the fan (" + std::to_string(parts[i].size()) +
                             " entries for " + std::to_string(fan.ray_count()) + " rays)");
        const auto amp = ampleness_class(fan, parts[i]);
        if (amp.kind == Ampleness::NotConvex)
            throw InputError("part " + std::to_string(i) + " is not nef: " + amp.witness);
        total = add(total, parts[i]);
    }
    MinkowskiResult result;
    result.support = total;
    result.polytope = polytope_from_support(fan, total);
    result.polytope.provenance = Provenance::Minkowski;
    bool parts_full = true;
    for (const auto& part : parts) {
        try {
            polys.push_back(polytope_from_support(fan, part));
        } catch (const DegenerateError&) {
            parts_full = false;
        }
    }
    if (parts_full) {
        result.vertex_sum_check = vertex_sums_match(polys, result.polytope);
    } else {
        // lower-dimensional nef parts: compare against the raw cone vertices
        std::vector<Polytope> raw;
        for (const auto& part : parts) {
            Polytope q;
            q.dimension = fan.dimension;
            q.halfspaces = fan_halfspaces(fan, part);
            q.vertices = cone_vertices(fan, part);
            sort_unique(q.vertices);
            raw.push_back(std::move(q));
        }
        result.vertex_sum_check = vertex_sums_match(raw, result.polytope);
    }
    return result;
}

Rational support_function(const Polytope& p, std::span<const Rational> u) {
    if (p.vertices.empty()) throw InputError("support_function: polytope has no vertices");
    Rational best = dot(u, p.vertices.front());
    for (const auto& v : p.vertices) best = std::max(best, dot(u, v));
    return best;
}

Polytope translate(const Polytope& p, std::span<const Rational> t) {
    if (t.size() != static_cast<std::size_t>(p.dimension)) throw InputError("translation has wrong dimension");
    Polytope out = p;
    for (auto& v : out.vertices) v = add(v, t);
    for (auto& h : out.halfspaces) h.offset -= dot(h.normal, t);
    if (!is_zero(t)) out.provenance = Provenance::Translate;
    return out;
}

}  // namespace torifano
