#pragma once

#include "torifano/rational.hpp"

#include <string>
#include <vector>

namespace torifano {

/// A simplicial fan given by primitive integer rays and maximal cones
/// (index sets into `rays`, each of size `dimension`).
struct Fan {
    int dimension = 0;
    std::vector<IntVector> rays;
    std::vector<std::vector<int>> max_cones;

    std::size_t ray_count() const { return rays.size(); }
    QVector ray(std::size_t j) const { return to_rationals(rays[j]); }
};

struct FanReport {
    bool complete = false;
    bool smooth = false;
    bool fano = false;
    /// Human-readable witnesses for each failing check, e.g. "cone 2 has determinant 2".
    std::vector<std::string> witnesses;
};

/// Checks smoothness (unimodular cones), completeness (every wall shared by
/// exactly two cones lying on opposite sides) and the Fano property
/// (all-ones support vector is ample).
///
/// Throws InputError for empty rays, out-of-range cone indices, wrong cone
/// sizes, and duplicate or non-primitive rays (the message names the ray).
FanReport validate_fan(const Fan& fan);

/// Structural checks only (the InputError part of validate_fan).
void check_fan_input(const Fan& fan);

}  // namespace torifano
