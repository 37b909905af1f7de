#include "torifano/fan.hpp"

#include "torifano/errors.hpp"
#include "torifano/polytope.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace torifano {

namespace {

std::int64_t gcd_of(const IntVector& v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

std::string join(const std::vector<int>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(idx[i]);
    }
    return s + "}";
}

QMatrix cone_matrix(const Fan& fan, const std::vector<int>& cone) {
    QMatrix m;
    for (int j : cone) m.push_back(fan.ray(j));
    return m;
}

}  // namespace

void check_fan_input(const Fan& fan) {
    if (fan.dimension <= 0) throw InputError("fan dimension must be positive");
    if (fan.rays.empty()) throw InputError("fan has no rays");
    if (fan.max_cones.empty()) throw InputError("fan has no maximal cones");
    const auto n = static_cast<std::size_t>(fan.dimension);
    std::set<IntVector> seen;
    for (std::size_t j = 0; j < fan.rays.size(); ++j) {
        const auto& r = fan.rays[j];
        if (r.size() != n) throw InputError("ray " + std::to_string(j) + " has wrong length");
        if (gcd_of(r) != 1) throw InputError("ray " + std::to_string(j) + " not primitive");
        if (!seen.insert(r).second) throw InputError("ray " + std::to_string(j) + " duplicated");
    }
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        const auto& cone = fan.max_cones[c];
        if (cone.size() != n)
            throw InputError("cone " + std::to_string(c) + " must have " + std::to_string(n) + " rays");
        for (int j : cone)
            if (j < 0 || static_cast<std::size_t>(j) >= fan.rays.size())
                throw InputError("cone " + std::to_string(c) + " index " + std::to_string(j) + " out of range");
        std::set<int> distinct(cone.begin(), cone.end());
        if (distinct.size() != cone.size()) throw InputError("cone " + std::to_string(c) + " repeats a ray");
    }
}

FanReport validate_fan(const Fan& fan) {
    check_fan_input(fan);
    FanReport report;
    const auto n = static_cast<std::size_t>(fan.dimension);

    report.smooth = true;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        const Rational det = determinant(cone_matrix(fan, fan.max_cones[c]));
        if (det != 1 && det != -1) {
            report.smooth = false;
            report.witnesses.push_back("cone " + std::to_string(c) + " has determinant " + to_string(det));
        }
    }

    // wall -> list of (cone index, ray opposite the wall)
    std::map<std::vector<int>, std::vector<std::pair<std::size_t, int>>> walls;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        auto cone = fan.max_cones[c];
        std::sort(cone.begin(), cone.end());
        for (std::size_t drop = 0; drop < n; ++drop) {
            std::vector<int> wall;
            for (std::size_t i = 0; i < n; ++i)
                if (i != drop) wall.push_back(cone[i]);
            walls[wall].emplace_back(c, cone[drop]);
        }
    }
    report.complete = true;
    for (const auto& [wall, incident] : walls) {
        if (incident.size() != 2) {
            report.complete = false;
            const std::string where = wall.empty()       ? std::string("the origin")
                                      : wall.size() == 1 ? "ray " + std::to_string(wall[0])
                                                         : "rays " + join(wall);
            report.witnesses.push_back("wall at " + where + " lies on " + std::to_string(incident.size()) + " cone(s)");
            continue;
        }
        // the two opposite rays must lie on opposite sides of the wall's hyperplane
        QMatrix rows;
        for (int j : wall) rows.push_back(fan.ray(j));
        const auto normal = null_space(rows, n);
        if (normal.size() != 1) {
            report.complete = false;
            report.witnesses.push_back("wall " + join(wall) + " is degenerate");
            continue;
        }
        const Rational s1 = dot(normal[0], fan.ray(incident[0].second));
        const Rational s2 = dot(normal[0], fan.ray(incident[1].second));
        if (s1 * s2 >= 0) {
            report.complete = false;
            report.witnesses.push_back("cones " + std::to_string(incident[0].first) + " and " +
                                       std::to_string(incident[1].first) + " overlap across wall " + join(wall));
        }
    }

    if (report.smooth) {
        const QVector ones(fan.ray_count(), Rational(1));
        const auto amp = ampleness_class(fan, ones);
        report.fano = amp.kind == Ampleness::Ample;
        if (!report.fano) report.witnesses.push_back("anticanonical support vector is not ample: " + amp.witness);
    } else {
        report.witnesses.push_back("fano check skipped: fan not smooth");
    }
    return report;
}

}  // namespace torifano
