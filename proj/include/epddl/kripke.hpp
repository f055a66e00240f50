// Desk-scale reference semantics: pointed Kripke structures, DEL
// entailment, transition functions for ontic/sensing/announcement actions
// under full/partial/oblivious observability, bisimulation minimization
// and a breadth-first plan search.
//
// States are immutable; apply() returns a fresh state. Construction from
// an initial specification requires the finitary-S5 shape (world literals
// plus common knowledge of literals among all agents).

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "epddl/grounder.hpp"

namespace epddl {

class OracleError : public std::runtime_error {
public:
    OracleError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Maps ground fluent names to bit positions of a world valuation.
class FluentIndex {
public:
    explicit FluentIndex(const std::vector<Fluent>& fluents);
    size_t size() const { return names_.size(); }
    int index_of(const std::string& ground_name) const;  // -1 when unknown
    const std::string& name_of(size_t i) const { return names_[i]; }

private:
    std::vector<std::string> names_;
    std::map<std::string, size_t> by_name_;
};

class KripkeState {
public:
    using Valuation = std::vector<bool>;

    KripkeState(std::shared_ptr<const FluentIndex> index, std::vector<std::string> agents,
                std::vector<Valuation> worlds,
                std::vector<std::vector<std::vector<int>>> relations, int pointed);

    size_t world_count() const { return worlds_.size(); }
    const std::vector<std::string>& agents() const { return agents_; }
    const FluentIndex& index() const { return *index_; }
    int pointed() const { return pointed_; }
    const Valuation& valuation(int world) const { return worlds_[world]; }
    const std::vector<int>& successors(size_t agent, int world) const {
        return relations_[agent][world];
    }

    bool entails(const Formula& f) const { return entails_at(f, pointed_); }
    bool entails_at(const Formula& f, int world) const;

    // True when every agent's relation is an equivalence relation.
    bool relations_are_equivalence() const;
    bool relation_is_equivalence(size_t agent) const;

    // Coarsest strong bisimulation quotient with canonically ranked
    // classes. Two bisimilar states produce identical canonical keys.
    KripkeState minimize() const;
    std::string canonical_key() const;

    std::string dump() const;

private:
    int agent_index(const std::string& name) const;

    std::shared_ptr<const FluentIndex> index_;
    std::vector<std::string> agents_;
    std::vector<Valuation> worlds_;
    // relations_[agent][world] = sorted successor world ids
    std::vector<std::vector<std::vector<int>>> relations_;
    int pointed_ = 0;

    friend KripkeState apply(const KripkeState&, const GroundAction&);
};

// Builds the initial state from the closed-world valuation and the
// commonly known literals. Throws OracleError (E_NOT_CONSTRUCTIBLE,
// E_INCONSISTENT_INIT) on unsupported shapes or contradictions.
KripkeState initial_state(const GroundedProblem& g);

// Applies one ground action; throws OracleError (E_PRECONDITION_FAILED)
// when the precondition does not hold at the pointed world. Observer
// conditions are evaluated at the pre-state pointed world.
KripkeState apply(const KripkeState& s, const GroundAction& action);

struct PlanResult {
    enum class Status { Found, NotFound, ResourceExhausted };
    Status status = Status::NotFound;
    std::vector<std::string> actions;

    bool found() const { return status == Status::Found; }
};

struct SearchLimits {
    int max_plan_length = 8;
    size_t max_states = 200000;
};

// Breadth-first search over bisimulation-canonical states; deterministic
// (actions expanded in lexicographic name order). Returns a shortest plan.
PlanResult bfs_plan(const GroundedProblem& g, const SearchLimits& limits);

}  // namespace epddl
