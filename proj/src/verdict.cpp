#include "kefun/verdict.hpp"

#include <algorithm>

#include "kefun/errors.hpp"

namespace kefun {

std::string to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

Tri tri_from_string(const std::string& s) {
    if (s == "yes") return Tri::Yes;
    if (s == "no") return Tri::No;
    if (s == "unknown") return Tri::Unknown;
    throw SpecError("expected yes/no/unknown, got '" + s + "'");
}

LawVerdict::LawVerdict(Tri atom_at_zero, Tri continuous, Tri absolutely_continuous, Trail trail)
    : atom_at_zero_(atom_at_zero), continuous_(continuous), ac_(absolutely_continuous), trail_(std::move(trail)) {
    if (ac_ == Tri::Yes && continuous_ != Tri::Yes) throw std::logic_error("verdict: absolutely continuous but not continuous");
    if (continuous_ == Tri::Yes && atom_at_zero_ != Tri::No) throw std::logic_error("verdict: continuous law with an atom at 0");
    if (atom_at_zero_ == Tri::Yes && continuous_ != Tri::No) throw std::logic_error("verdict: atom at 0 but not discontinuous");
    const bool decided = atom_at_zero_ != Tri::Unknown || continuous_ != Tri::Unknown || ac_ != Tri::Unknown;
    if (decided && trail_.empty()) throw std::logic_error("verdict: decided flags need a trail");
}

std::string LawVerdict::deciding_clause() const {
    // the last entry that is not a clause attempt which failed to fire
    for (auto it = trail_.rbegin(); it != trail_.rend(); ++it) {
        const auto fires = std::find_if(it->facts.begin(), it->facts.end(), [](const auto& f) { return f.first == "fires"; });
        if (fires == it->facts.end() || fires->second == "true") return it->clause;
    }
    return {};
}

}  // namespace kefun
