#include "torifano/triangulation.hpp"

#include "torifano/errors.hpp"

#include <algorithm>
#include <set>

namespace torifano {

namespace {

using Index = std::size_t;
using IndexSet = std::vector<Index>;  // sorted

class Triangulator {
public:
    explicit Triangulator(const Polytope& p) : p_(p) {
        tight_.resize(p.halfspaces.size());
        for (Index j = 0; j < p.halfspaces.size(); ++j)
            for (Index v = 0; v < p.vertices.size(); ++v)
                if (p.halfspaces[j].is_tight(p.vertices[v])) tight_[j].push_back(v);
    }

    void run(const IndexSet& face, int dim, IndexSet& prefix, std::vector<IndexSet>& out) const {
        if (static_cast<int>(face.size()) == dim + 1) {
            IndexSet s = prefix;
            s.insert(s.end(), face.begin(), face.end());
            out.push_back(std::move(s));
            return;
        }
        // vertices are stored lexicographically, so face[0] is the lex-min vertex
        const Index apex = face.front();
        prefix.push_back(apex);
        for (const auto& sub : subfacets(face, dim)) {
            if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
            run(sub, dim - 1, prefix, out);
        }
        prefix.pop_back();
    }

private:
    // (dim-1)-faces of a dim-face, in a fixed order
    std::vector<IndexSet> subfacets(const IndexSet& face, int dim) const {
        std::set<IndexSet> found;
        for (const auto& tight : tight_) {
            IndexSet sub;
            std::set_intersection(face.begin(), face.end(), tight.begin(), tight.end(), std::back_inserter(sub));
            if (sub.size() < static_cast<std::size_t>(dim) || sub.size() == face.size()) continue;
            if (found.count(sub)) continue;
            std::vector<QVector> pts;
            for (auto v : sub) pts.push_back(p_.vertices[v]);
            if (affine_dimension(pts) == dim - 1) found.insert(std::move(sub));
        }
        return {found.begin(), found.end()};
    }

    const Polytope& p_;
    std::vector<IndexSet> tight_;
};

}  // namespace

Rational simplex_volume(const Simplex& s) {
    const std::size_t n = s.size() - 1;
    QMatrix m;
    for (std::size_t i = 1; i <= n; ++i) m.push_back(subtract(s[i], s[0]));
    Rational det = abs(determinant(std::move(m)));
    Rational fact = 1;
    for (std::size_t i = 2; i <= n; ++i) fact *= static_cast<long long>(i);
    return det / fact;
}

SimplexMesh triangulate(const Polytope& p) {
    if (affine_dimension(p.vertices) != p.dimension)
        throw DegenerateError("cannot triangulate a lower-dimensional polytope");
    if (!std::is_sorted(p.vertices.begin(), p.vertices.end(),
                        [](const QVector& a, const QVector& b) { return lex_less(a, b); }))
        throw InputError("triangulate: polytope vertices must be sorted (use finalize_polytope)");
    Triangulator t(p);
    IndexSet all(p.vertices.size());
    for (Index i = 0; i < all.size(); ++i) all[i] = i;
    std::vector<IndexSet> cells;
    IndexSet prefix;
    t.run(all, p.dimension, prefix, cells);

    SimplexMesh mesh;
    mesh.dimension = p.dimension;
    mesh.simplices.reserve(cells.size());
    for (const auto& cell : cells) {
        Simplex s;
        for (auto v : cell) s.push_back(p.vertices[v]);
        mesh.simplices.push_back(std::move(s));
    }
    return mesh;
}

}  // namespace torifano
