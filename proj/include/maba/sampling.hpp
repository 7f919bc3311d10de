#pragma once

#include <span>

#include "maba/errors.hpp"
#include "maba/prng.hpp"
#include "maba/rational.hpp"

namespace maba {

// Rejection-samples `count` points in the centered box of given half width.
// A candidate is rejected if it comes within min_sep of an already chosen
// point, of any point in `avoid`, or of any of those shifted by +-s for
// s in `shifts` (used to keep h(x,y) and f(x,y+c) factors away from their
// zeros and poles).
inline ParamSet draw_separated(Prng& rng, int count, double half_width, double min_sep,
                               std::span<const cx> avoid = {}, std::span<const cx> shifts = {}) {
    ParamSet out;
    out.reserve(count);
    int attempts = 0;
    auto clear_of = [&](cx x, cx y) {
        if (std::abs(x - y) < min_sep) return false;
        for (cx s : shifts)
            if (std::abs(x - y - s) < min_sep || std::abs(x - y + s) < min_sep) return false;
        return true;
    };
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100000) throw Error("draw_separated: rejection sampling stalled");
        cx cand = rng.complex_in_box(half_width);
        bool ok = true;
        for (cx y : out)
            if (!clear_of(cand, y)) { ok = false; break; }
        if (ok)
            for (cx y : avoid)
                if (!clear_of(cand, y)) { ok = false; break; }
        if (ok) out.push_back(cand);
    }
    return out;
}

}  // namespace maba
