#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kefun/conditions.hpp"

namespace kefun {

enum class Tri { Yes, No, Unknown };

std::string to_string(Tri t);
Tri tri_from_string(const std::string& s);

/// One applied clause of a classification, with the predicates it looked at.
struct TrailEntry {
    std::string clause;    ///< stable identifier, e.g. "killed-ac/v"
    std::string citation;  ///< human-readable statement name
    std::vector<std::pair<std::string, std::string>> facts;
    std::vector<std::pair<std::string, ConditionResult>> conditions;

    TrailEntry& fact(std::string name, std::string value) {
        facts.emplace_back(std::move(name), std::move(value));
        return *this;
    }
    TrailEntry& fact(std::string name, bool value) { return fact(std::move(name), std::string(value ? "true" : "false")); }
    TrailEntry& condition(std::string name, ConditionResult r) {
        conditions.emplace_back(std::move(name), std::move(r));
        return *this;
    }
};

using Trail = std::vector<TrailEntry>;

/// Atom/continuity/absolute-continuity flags of a law.
///
/// The constructor enforces ac=Yes => continuous=Yes => atom_at_zero=No and
/// a non-empty trail whenever a flag is decided.
class LawVerdict {
public:
    LawVerdict(Tri atom_at_zero, Tri continuous, Tri absolutely_continuous, Trail trail);

    [[nodiscard]] Tri atom_at_zero() const { return atom_at_zero_; }
    [[nodiscard]] Tri continuous() const { return continuous_; }
    [[nodiscard]] Tri absolutely_continuous() const { return ac_; }
    [[nodiscard]] const Trail& trail() const { return trail_; }
    /// Clause id of the entry that decided absolute continuity, if any.
    [[nodiscard]] std::string deciding_clause() const;

    friend bool operator==(const LawVerdict& a, const LawVerdict& b) {
        return a.atom_at_zero_ == b.atom_at_zero_ && a.continuous_ == b.continuous_ && a.ac_ == b.ac_;
    }

private:
    Tri atom_at_zero_;
    Tri continuous_;
    Tri ac_;
    Trail trail_;
};

}  // namespace kefun
