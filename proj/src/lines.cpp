#include "pclab/lines.hpp"

namespace pclab {

LeveledLines make_leveled(std::span<const Formula> lines) {
    LeveledLines out;
    out.lines.assign(lines.begin(), lines.end());
    for (const Formula& sub : subformulas(lines)) out.levels[sub.id()].insert(sub.depth());
    return out;
}

size_t distinct_subformulas(std::span<const Formula> lines) {
    return subformulas(lines).size();
}

} // namespace pclab
