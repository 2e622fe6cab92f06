#pragma once

#include <set>
#include <unordered_map>
#include <vector>

#include "pclab/formula.hpp"

namespace pclab {

/// Levels at which each distinct subformula appears. A formula appears on
/// level j when it is the image, under the restrictions applied so far, of an
/// original subformula of depth j.
using LevelMap = std::unordered_map<FormulaId, std::set<int>>;

struct LeveledLines {
    std::vector<Formula> lines;
    LevelMap levels;
};

/// Initial level map: every distinct subformula at its own depth.
LeveledLines make_leveled(std::span<const Formula> lines);

/// Count of distinct subformulas across the lines.
size_t distinct_subformulas(std::span<const Formula> lines);

} // namespace pclab
