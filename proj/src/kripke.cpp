#include "epddl/kripke.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace epddl {

namespace {

constexpr size_t kMaxFreeFluents = 20;

}  // namespace

FluentIndex::FluentIndex(const std::vector<Fluent>& fluents) {
    for (const auto& f : fluents) {
        std::string name = f.ground_name();
        if (by_name_.emplace(name, names_.size()).second) names_.push_back(std::move(name));
    }
}

int FluentIndex::index_of(const std::string& ground_name) const {
    auto it = by_name_.find(ground_name);
    return it == by_name_.end() ? -1 : static_cast<int>(it->second);
}

KripkeState::KripkeState(std::shared_ptr<const FluentIndex> index,
                         std::vector<std::string> agents, std::vector<Valuation> worlds,
                         std::vector<std::vector<std::vector<int>>> relations, int pointed)
    : index_(std::move(index)),
      agents_(std::move(agents)),
      worlds_(std::move(worlds)),
      relations_(std::move(relations)),
      pointed_(pointed) {
    for (auto& per_agent : relations_)
        for (auto& succ : per_agent) std::sort(succ.begin(), succ.end());
}

int KripkeState::agent_index(const std::string& name) const {
    for (size_t i = 0; i < agents_.size(); ++i)
        if (agents_[i] == name) return static_cast<int>(i);
    return -1;
}

bool KripkeState::entails_at(const Formula& f, int world) const {
    switch (f.kind()) {
        case FormulaKind::Atom: {
            int bit = index_->index_of(f.fluent().ground_name());
            if (bit < 0)
                throw OracleError(codes::not_constructible,
                                  "unknown fluent '" + f.fluent().ground_name() + "'");
            return worlds_[world][static_cast<size_t>(bit)];
        }
        case FormulaKind::Not:
            return !entails_at(f.children()[0], world);
        case FormulaKind::And:
            return std::all_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return entails_at(c, world); });
        case FormulaKind::Or:
            return std::any_of(f.children().begin(), f.children().end(),
                               [&](const Formula& c) { return entails_at(c, world); });
        case FormulaKind::Implies:
            return !entails_at(f.children()[0], world) || entails_at(f.children()[1], world);
        case FormulaKind::Believes: {
            int ai = agent_index(f.agent().name);
            if (ai < 0)
                throw OracleError(codes::not_constructible,
                                  "unknown agent '" + f.agent().name + "'");
            const auto& succ = relations_[static_cast<size_t>(ai)][world];
            return std::all_of(succ.begin(), succ.end(),
                               [&](int w) { return entails_at(f.children()[0], w); });
        }
        case FormulaKind::Common: {
            // transitive closure of the union of the group's relations
            std::vector<int> agent_ids;
            for (const auto& t : f.agents()) {
                int ai = agent_index(t.name);
                if (ai < 0)
                    throw OracleError(codes::not_constructible,
                                      "unknown agent '" + t.name + "'");
                agent_ids.push_back(ai);
            }
            std::vector<bool> visited(worlds_.size(), false);
            std::deque<int> queue;
            auto push_successors = [&](int w) {
                for (int ai : agent_ids)
                    for (int v : relations_[static_cast<size_t>(ai)][w])
                        if (!visited[static_cast<size_t>(v)]) {
                            visited[static_cast<size_t>(v)] = true;
                            queue.push_back(v);
                        }
            };
            push_successors(world);
            while (!queue.empty()) {
                int w = queue.front();
                queue.pop_front();
                if (!entails_at(f.children()[0], w)) return false;
                push_successors(w);
            }
            return true;
        }
    }
    return false;
}

bool KripkeState::relation_is_equivalence(size_t agent) const {
    const auto& rel = relations_[agent];
    size_t n = worlds_.size();
    auto has = [&](int from, int to) {
        const auto& succ = rel[static_cast<size_t>(from)];
        return std::binary_search(succ.begin(), succ.end(), to);
    };
    for (size_t w = 0; w < n; ++w) {
        if (!has(static_cast<int>(w), static_cast<int>(w))) return false;
        for (int v : rel[w]) {
            if (!has(v, static_cast<int>(w))) return false;
            for (int u : rel[static_cast<size_t>(v)])
                if (!has(static_cast<int>(w), u)) return false;
        }
    }
    return true;
}

bool KripkeState::relations_are_equivalence() const {
    for (size_t a = 0; a < agents_.size(); ++a)
        if (!relation_is_equivalence(a)) return false;
    return true;
}

namespace {

// Deterministic partition refinement. Colors are ranks of content-derived
// signatures, so isomorphic structures get identical colorings.
std::vector<int> refine_colors(const std::vector<KripkeState::Valuation>& worlds,
                               const std::vector<std::vector<std::vector<int>>>& relations) {
    size_t n = worlds.size();
    std::vector<int> color(n);
    {
        std::vector<KripkeState::Valuation> distinct(worlds.begin(), worlds.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (size_t w = 0; w < n; ++w)
            color[w] = static_cast<int>(
                std::lower_bound(distinct.begin(), distinct.end(), worlds[w]) -
                distinct.begin());
    }
    size_t color_count = 0;
    for (int c : color) color_count = std::max(color_count, static_cast<size_t>(c) + 1);

    using Signature = std::pair<int, std::vector<std::vector<int>>>;
    while (true) {
        std::vector<Signature> sigs(n);
        for (size_t w = 0; w < n; ++w) {
            std::vector<std::vector<int>> per_agent;
            per_agent.reserve(relations.size());
            for (const auto& rel : relations) {
                std::vector<int> succ_colors;
                succ_colors.reserve(rel[w].size());
                for (int v : rel[w]) succ_colors.push_back(color[static_cast<size_t>(v)]);
                std::sort(succ_colors.begin(), succ_colors.end());
                succ_colors.erase(std::unique(succ_colors.begin(), succ_colors.end()),
                                  succ_colors.end());
                per_agent.push_back(std::move(succ_colors));
            }
            sigs[w] = {color[w], std::move(per_agent)};
        }
        std::vector<Signature> distinct = sigs;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<int> next(n);
        for (size_t w = 0; w < n; ++w)
            next[w] = static_cast<int>(
                std::lower_bound(distinct.begin(), distinct.end(), sigs[w]) - distinct.begin());
        if (distinct.size() == color_count) {
            // stable partition (ranks may permute, classes do not change)
            return next;
        }
        color = std::move(next);
        color_count = distinct.size();
    }
}

}  // namespace

KripkeState KripkeState::minimize() const {
    std::vector<int> color = refine_colors(worlds_, relations_);
    int classes = 0;
    for (int c : color) classes = std::max(classes, c + 1);

    std::vector<Valuation> new_worlds(static_cast<size_t>(classes));
    std::vector<std::vector<std::vector<int>>> new_rel(
        agents_.size(),
        std::vector<std::vector<int>>(static_cast<size_t>(classes)));
    std::vector<bool> seen(static_cast<size_t>(classes), false);
    for (size_t w = 0; w < worlds_.size(); ++w) {
        int c = color[w];
        if (seen[static_cast<size_t>(c)]) continue;
        seen[static_cast<size_t>(c)] = true;
        new_worlds[static_cast<size_t>(c)] = worlds_[w];
        for (size_t a = 0; a < agents_.size(); ++a) {
            std::set<int> succ;
            for (int v : relations_[a][w]) succ.insert(color[static_cast<size_t>(v)]);
            new_rel[a][static_cast<size_t>(c)].assign(succ.begin(), succ.end());
        }
    }
    return KripkeState(index_, agents_, std::move(new_worlds), std::move(new_rel),
                       color[static_cast<size_t>(pointed_)]);
}

std::string KripkeState::canonical_key() const {
    KripkeState m = minimize();
    std::ostringstream os;
    os << m.pointed_ << "|";
    for (size_t w = 0; w < m.worlds_.size(); ++w) {
        os << "w";
        for (bool b : m.worlds_[w]) os << (b ? '1' : '0');
        for (size_t a = 0; a < m.agents_.size(); ++a) {
            os << ";";
            for (int v : m.relations_[a][w]) os << v << ",";
        }
        os << "|";
    }
    return os.str();
}

std::string KripkeState::dump() const {
    std::ostringstream os;
    os << "worlds: " << worlds_.size() << ", pointed: " << pointed_ << "\n";
    for (size_t w = 0; w < worlds_.size(); ++w) {
        os << (static_cast<int>(w) == pointed_ ? "*" : " ") << "w" << w << ": {";
        bool first = true;
        for (size_t i = 0; i < worlds_[w].size(); ++i) {
            if (!worlds_[w][i]) continue;
            if (!first) os << ", ";
            os << index_->name_of(i);
            first = false;
        }
        os << "}\n";
    }
    for (size_t a = 0; a < agents_.size(); ++a) {
        os << agents_[a] << ":";
        for (size_t w = 0; w < worlds_.size(); ++w)
            for (int v : relations_[a][w]) os << " " << w << "->" << v;
        os << "\n";
    }
    return os.str();
}

KripkeState initial_state(const GroundedProblem& g) {
    auto index = std::make_shared<FluentIndex>(g.fluents);
    size_t n_fluents = index->size();

    // commonly known literals; everything else varies across worlds
    std::vector<int> fixed(n_fluents, -1);  // -1 free, 0 false, 1 true
    for (const auto& belief : g.init_beliefs) {
        const char* unsupported =
            "initial beliefs must be common knowledge, among all agents, of a literal";
        // a Believes node is the normalized singleton Common
        if (belief.kind() == FormulaKind::Believes) {
            if (g.agents.size() != 1 || belief.agent().name != g.agents.front().name)
                throw OracleError(codes::not_constructible, unsupported);
        } else if (belief.kind() == FormulaKind::Common) {
            if (belief.agents().size() != g.agents.size())
                throw OracleError(codes::not_constructible, unsupported);
            std::set<std::string> names;
            for (const auto& t : belief.agents()) names.insert(t.name);
            for (const auto& a : g.agents)
                if (!names.count(a.name))
                    throw OracleError(codes::not_constructible, unsupported);
        } else {
            throw OracleError(codes::not_constructible, unsupported);
        }

        const Formula& body = belief.children()[0];
        bool value = body.kind() == FormulaKind::Atom;
        const Formula* atom = &body;
        if (!value) {
            if (body.kind() != FormulaKind::Not ||
                body.children()[0].kind() != FormulaKind::Atom)
                throw OracleError(codes::not_constructible, unsupported);
            atom = &body.children()[0];
        }
        int bit = index->index_of(atom->fluent().ground_name());
        if (bit < 0)
            throw OracleError(codes::not_constructible,
                              "unknown fluent '" + atom->fluent().ground_name() + "'");
        int v = value ? 1 : 0;
        if (fixed[static_cast<size_t>(bit)] == (1 - v))
            throw OracleError(codes::inconsistent_init,
                              "contradictory common knowledge about '" +
                                  atom->fluent().ground_name() + "'");
        fixed[static_cast<size_t>(bit)] = v;
    }

    // pointed world: closed-world valuation from :init
    KripkeState::Valuation pointed_val(n_fluents, false);
    for (const auto& f : g.init_world) {
        int bit = index->index_of(f.ground_name());
        if (bit < 0)
            throw OracleError(codes::not_constructible,
                              "unknown fluent '" + f.ground_name() + "'");
        pointed_val[static_cast<size_t>(bit)] = true;
    }
    for (size_t i = 0; i < n_fluents; ++i) {
        if (fixed[i] >= 0 && pointed_val[i] != static_cast<bool>(fixed[i]))
            throw OracleError(codes::inconsistent_init,
                              "the closed-world :init valuation contradicts common knowledge "
                              "about '" + index->name_of(i) + "'");
    }

    std::vector<size_t> free_bits;
    for (size_t i = 0; i < n_fluents; ++i)
        if (fixed[i] < 0) free_bits.push_back(i);
    if (free_bits.size() > kMaxFreeFluents)
        throw OracleError(codes::not_constructible,
                          "too many commonly-unknown fluents (" +
                              std::to_string(free_bits.size()) + ") for explicit construction");

    // worlds: all valuations consistent with the commonly known literals
    size_t n_worlds = static_cast<size_t>(1) << free_bits.size();
    std::vector<KripkeState::Valuation> worlds;
    worlds.reserve(n_worlds);
    int pointed = -1;
    for (size_t mask = 0; mask < n_worlds; ++mask) {
        KripkeState::Valuation v(n_fluents, false);
        for (size_t i = 0; i < n_fluents; ++i)
            if (fixed[i] == 1) v[i] = true;
        for (size_t b = 0; b < free_bits.size(); ++b)
            v[free_bits[b]] = (mask >> b) & 1;
        if (v == pointed_val) pointed = static_cast<int>(worlds.size());
        worlds.push_back(std::move(v));
    }

    // universal relation for every agent: nobody can distinguish the worlds
    std::vector<int> all(worlds.size());
    for (size_t w = 0; w < worlds.size(); ++w) all[w] = static_cast<int>(w);
    std::vector<std::vector<std::vector<int>>> relations(
        g.agents.size(), std::vector<std::vector<int>>(worlds.size(), all));

    std::vector<std::string> agent_names;
    for (const auto& a : g.agents) agent_names.push_back(a.name);
    return KripkeState(std::move(index), std::move(agent_names), std::move(worlds),
                       std::move(relations), pointed);
}

namespace {

enum class Role { Full, Partial, Oblivious };

std::vector<Role> classify_observers(const KripkeState& s, const GroundAction& action) {
    std::vector<Role> roles(s.agents().size(), Role::Oblivious);
    auto satisfied = [&](const GroundObserver& o) {
        return o.condition.is_true() || s.entails(o.condition);
    };
    for (size_t a = 0; a < s.agents().size(); ++a) {
        const std::string& name = s.agents()[a];
        for (const auto& o : action.full_observers)
            if (o.agent == name && satisfied(o)) roles[a] = Role::Full;
        if (roles[a] == Role::Full) continue;
        for (const auto& o : action.partial_observers)
            if (o.agent == name && satisfied(o)) roles[a] = Role::Partial;
    }
    return roles;
}

// Drops worlds unreachable from the pointed world (entailment at the
// pointed world never inspects them).
KripkeState prune_unreachable(std::shared_ptr<const FluentIndex> index,
                              std::vector<std::string> agents,
                              std::vector<KripkeState::Valuation> worlds,
                              std::vector<std::vector<std::vector<int>>> relations,
                              int pointed) {
    size_t n = worlds.size();
    std::vector<bool> reach(n, false);
    std::deque<int> queue{pointed};
    reach[static_cast<size_t>(pointed)] = true;
    while (!queue.empty()) {
        int w = queue.front();
        queue.pop_front();
        for (const auto& rel : relations)
            for (int v : rel[static_cast<size_t>(w)])
                if (!reach[static_cast<size_t>(v)]) {
                    reach[static_cast<size_t>(v)] = true;
                    queue.push_back(v);
                }
    }
    std::vector<int> remap(n, -1);
    int next = 0;
    for (size_t w = 0; w < n; ++w)
        if (reach[w]) remap[w] = next++;
    std::vector<KripkeState::Valuation> new_worlds;
    new_worlds.reserve(static_cast<size_t>(next));
    for (size_t w = 0; w < n; ++w)
        if (reach[w]) new_worlds.push_back(std::move(worlds[w]));
    std::vector<std::vector<std::vector<int>>> new_rel(
        agents.size(), std::vector<std::vector<int>>(static_cast<size_t>(next)));
    for (size_t a = 0; a < agents.size(); ++a)
        for (size_t w = 0; w < n; ++w) {
            if (!reach[w]) continue;
            for (int v : relations[a][w])
                if (reach[static_cast<size_t>(v)])
                    new_rel[a][static_cast<size_t>(remap[w])].push_back(
                        remap[static_cast<size_t>(v)]);
        }
    return KripkeState(std::move(index), std::move(agents), std::move(new_worlds),
                       std::move(new_rel), remap[static_cast<size_t>(pointed)]);
}

}  // namespace

KripkeState apply(const KripkeState& s, const GroundAction& action) {
    if (!s.entails(action.precondition))
        throw OracleError(codes::precondition_failed,
                          "precondition of '" + action.name + "' does not hold");

    std::vector<Role> roles = classify_observers(s, action);
    size_t n = s.world_count();
    size_t n_agents = s.agents().size();

    // layout: worlds [0, n) are post-action copies, [n, 2n) the preserved
    // pre-action copies that oblivious agents keep pointing into
    std::vector<KripkeState::Valuation> worlds(2 * n);
    for (size_t w = 0; w < n; ++w) {
        worlds[w] = s.valuation(static_cast<int>(w));
        worlds[n + w] = s.valuation(static_cast<int>(w));
    }

    int effect_bit = -1;
    if (action.act_type == ActionType::Ontic) {
        for (const auto& lit : action.effects) {
            int bit = s.index().index_of(lit.fluent.ground_name());
            if (bit < 0)
                throw OracleError(codes::not_constructible,
                                  "unknown fluent '" + lit.fluent.ground_name() + "'");
            for (size_t w = 0; w < n; ++w) worlds[w][static_cast<size_t>(bit)] = !lit.negated;
        }
    } else {
        effect_bit = s.index().index_of(action.effect_fluent.ground_name());
        if (effect_bit < 0)
            throw OracleError(codes::not_constructible,
                              "unknown fluent '" + action.effect_fluent.ground_name() + "'");
    }

    std::vector<std::vector<std::vector<int>>> relations(
        n_agents, std::vector<std::vector<int>>(2 * n));
    for (size_t a = 0; a < n_agents; ++a) {
        for (size_t w = 0; w < n; ++w) {
            const auto& old_succ = s.successors(a, static_cast<int>(w));
            // pre copies keep the old relation unchanged
            for (int v : old_succ)
                relations[a][n + w].push_back(static_cast<int>(n) + v);
            switch (roles[a]) {
                case Role::Full:
                    for (int v : old_succ) {
                        if (action.act_type != ActionType::Ontic) {
                            // sensing/announcement: refine by agreement on
                            // the effect fluent
                            bool same =
                                s.valuation(static_cast<int>(w))[static_cast<size_t>(
                                    effect_bit)] ==
                                s.valuation(v)[static_cast<size_t>(effect_bit)];
                            if (!same) continue;
                        }
                        relations[a][w].push_back(v);
                    }
                    break;
                case Role::Partial:
                    // aware of the act but not of the sensed value: the
                    // relation among post worlds is untouched (for ontic
                    // acts the deterministic effect is visible anyway)
                    for (int v : old_succ) relations[a][w].push_back(v);
                    break;
                case Role::Oblivious:
                    for (int v : old_succ)
                        relations[a][w].push_back(static_cast<int>(n) + v);
                    break;
            }
        }
    }

    return prune_unreachable(s.index_, s.agents(), std::move(worlds),
                             std::move(relations), s.pointed());
}

PlanResult bfs_plan(const GroundedProblem& g, const SearchLimits& limits) {
    KripkeState init = initial_state(g).minimize();
    if (init.entails(g.goal)) return {PlanResult::Status::Found, {}};

    std::vector<const GroundAction*> actions;
    for (const auto& a : g.actions) actions.push_back(&a);
    std::sort(actions.begin(), actions.end(),
              [](const GroundAction* x, const GroundAction* y) { return x->name < y->name; });

    struct Entry {
        KripkeState state;
        std::vector<std::string> plan;
    };
    std::deque<Entry> frontier;
    std::set<std::string> visited;
    visited.insert(init.canonical_key());
    frontier.push_back({std::move(init), {}});

    while (!frontier.empty()) {
        Entry cur = std::move(frontier.front());
        frontier.pop_front();
        if (static_cast<int>(cur.plan.size()) >= limits.max_plan_length) continue;
        for (const GroundAction* act : actions) {
            if (!cur.state.entails(act->precondition)) continue;
            KripkeState next = apply(cur.state, *act).minimize();
            std::string key = next.canonical_key();
            if (!visited.insert(std::move(key)).second) continue;
            std::vector<std::string> plan = cur.plan;
            plan.push_back(act->name);
            if (next.entails(g.goal)) return {PlanResult::Status::Found, std::move(plan)};
            if (visited.size() > limits.max_states)
                return {PlanResult::Status::ResourceExhausted, {}};
            frontier.push_back({std::move(next), std::move(plan)});
        }
    }
    return {PlanResult::Status::NotFound, {}};
}

}  // namespace epddl
