#include "descomp/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace descomp {

namespace {

void sort_unique(std::vector<State>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool contains_state(const std::vector<State>& sorted, State q) {
    return std::binary_search(sorted.begin(), sorted.end(), q);
}

/// Adjacency index over an NFA's transition list.
struct NfaIndex {
    std::vector<std::vector<std::pair<char, State>>> symbol_edges; // per state
    std::vector<std::vector<State>> eps_edges;                     // per state

    explicit NfaIndex(const Nfa& n)
        : symbol_edges(n.state_count), eps_edges(n.state_count) {
        for (const auto& t : n.transitions) {
            if (t.label.has_value())
                symbol_edges[t.from].emplace_back(*t.label, t.to);
            else
                eps_edges[t.from].push_back(t.to);
        }
    }
};

std::vector<State> eps_closure(const NfaIndex& idx, std::vector<State> states) {
    std::vector<char> seen(idx.eps_edges.size(), 0);
    std::deque<State> work(states.begin(), states.end());
    for (State q : states)
        seen[q] = 1;
    while (!work.empty()) {
        State q = work.front();
        work.pop_front();
        for (State r : idx.eps_edges[q])
            if (!seen[r]) {
                seen[r] = 1;
                states.push_back(r);
                work.push_back(r);
            }
    }
    sort_unique(states);
    return states;
}

std::vector<State> step_symbol(const NfaIndex& idx, const std::vector<State>& from, char c) {
    std::vector<State> out;
    for (State q : from)
        for (const auto& [label, to] : idx.symbol_edges[q])
            if (label == c)
                out.push_back(to);
    sort_unique(out);
    return out;
}

/// States reachable from `start` following all transitions.
std::vector<char> reachable_mask(const Nfa& n, const std::vector<State>& start) {
    std::vector<char> seen(n.state_count, 0);
    std::deque<State> work;
    for (State q : start) {
        seen[q] = 1;
        work.push_back(q);
    }
    std::vector<std::vector<State>> adj(n.state_count);
    for (const auto& t : n.transitions)
        adj[t.from].push_back(t.to);
    while (!work.empty()) {
        State q = work.front();
        work.pop_front();
        for (State r : adj[q])
            if (!seen[r]) {
                seen[r] = 1;
                work.push_back(r);
            }
    }
    return seen;
}

/// States from which a final state is reachable.
std::vector<char> coreachable_mask(const Nfa& n) {
    std::vector<char> seen(n.state_count, 0);
    std::vector<std::vector<State>> radj(n.state_count);
    for (const auto& t : n.transitions)
        radj[t.to].push_back(t.from);
    std::deque<State> work;
    for (State q : n.final_states) {
        seen[q] = 1;
        work.push_back(q);
    }
    while (!work.empty()) {
        State q = work.front();
        work.pop_front();
        for (State r : radj[q])
            if (!seen[r]) {
                seen[r] = 1;
                work.push_back(r);
            }
    }
    return seen;
}

void require_same_alphabet(const Alphabet& a, const Alphabet& b, const char* op) {
    if (a != b)
        throw AlphabetMismatch(std::string(op) + ": alphabets '" + a.symbols() + "' and '" +
                               b.symbols() + "' differ");
}

} // namespace

void Nfa::normalize_and_validate() {
    sort_unique(initial_states);
    sort_unique(final_states);
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());

    if (state_count == 0)
        throw std::invalid_argument("nfa: state_count must be positive");
    if (initial_states.empty())
        throw std::invalid_argument("nfa: initial state set must be non-empty");
    for (State q : initial_states)
        if (q >= state_count)
            throw std::invalid_argument("nfa: initial state out of range");
    for (State q : final_states)
        if (q >= state_count)
            throw std::invalid_argument("nfa: final state out of range");
    for (const auto& t : transitions) {
        if (t.from >= state_count || t.to >= state_count)
            throw std::invalid_argument("nfa: transition state out of range");
        if (t.label.has_value() && !alphabet.contains(*t.label))
            throw std::invalid_argument(std::string("nfa: transition label '") + *t.label +
                                        "' not in alphabet");
    }
}

bool Nfa::is_final(State q) const { return contains_state(final_states, q); }
bool Nfa::is_initial(State q) const { return contains_state(initial_states, q); }

bool Nfa::operator==(const Nfa& other) const {
    return state_count == other.state_count && alphabet == other.alphabet &&
           transitions == other.transitions && initial_states == other.initial_states &&
           final_states == other.final_states;
}

State Dfa::next(State q, char symbol) const {
    return next_by_index(q, alphabet.index(symbol));
}

bool Dfa::is_final(State q) const { return contains_state(final_states, q); }

void Dfa::normalize_and_validate() {
    sort_unique(final_states);
    if (state_count == 0)
        throw std::invalid_argument("dfa: state_count must be positive");
    if (initial >= state_count)
        throw std::invalid_argument("dfa: initial state out of range");
    if (transition.size() != state_count * alphabet.size())
        throw std::invalid_argument("dfa: transition table must be total");
    for (State t : transition)
        if (t >= state_count)
            throw std::invalid_argument("dfa: transition target out of range");
    for (State q : final_states)
        if (q >= state_count)
            throw std::invalid_argument("dfa: final state out of range");
}

bool Dfa::operator==(const Dfa& other) const {
    return state_count == other.state_count && alphabet == other.alphabet &&
           transition == other.transition && initial == other.initial &&
           final_states == other.final_states;
}

// ---- decision procedures ----

bool nfa_member(const Nfa& n, const Word& w) {
    require_over(w, n.alphabet, "nfa_member");
    NfaIndex idx(n);
    std::vector<State> current = eps_closure(idx, n.initial_states);
    for (std::size_t i = 0; i < w.size(); ++i) {
        current = eps_closure(idx, step_symbol(idx, current, w.at(i)));
        if (current.empty())
            return false;
    }
    for (State q : current)
        if (n.is_final(q))
            return true;
    return false;
}

bool nfa_empty(const Nfa& n) {
    auto reach = reachable_mask(n, n.initial_states);
    for (State q : n.final_states)
        if (reach[q])
            return false;
    return true;
}

bool nfa_finite(const Nfa& n) {
    auto reach = reachable_mask(n, n.initial_states);
    auto coreach = coreachable_mask(n);
    std::vector<char> trim(n.state_count);
    for (std::size_t q = 0; q < n.state_count; ++q)
        trim[q] = reach[q] && coreach[q];

    // A cycle through a symbol transition inside the trim part pumps word
    // length. For each trim symbol edge u -a-> v, test whether u is
    // reachable from v within the trim part.
    std::vector<std::vector<State>> adj(n.state_count);
    for (const auto& t : n.transitions)
        if (trim[t.from] && trim[t.to])
            adj[t.from].push_back(t.to);

    auto reaches = [&](State from, State target) {
        std::vector<char> seen(n.state_count, 0);
        std::deque<State> work{from};
        seen[from] = 1;
        while (!work.empty()) {
            State q = work.front();
            work.pop_front();
            if (q == target)
                return true;
            for (State r : adj[q])
                if (!seen[r]) {
                    seen[r] = 1;
                    work.push_back(r);
                }
        }
        return false;
    };

    for (const auto& t : n.transitions)
        if (t.label.has_value() && trim[t.from] && trim[t.to] && reaches(t.to, t.from))
            return false;
    return true;
}

bool dfa_member(const Dfa& d, const Word& w) {
    require_over(w, d.alphabet, "dfa_member");
    State q = d.initial;
    for (std::size_t i = 0; i < w.size(); ++i)
        q = d.next(q, w.at(i));
    return d.is_final(q);
}

// ---- canonical forms ----

Dfa determinize(const Nfa& n) {
    NfaIndex idx(n);
    std::map<std::vector<State>, State> subset_id;
    std::vector<std::vector<State>> subsets;
    auto intern = [&](std::vector<State> s) {
        auto it = subset_id.find(s);
        if (it != subset_id.end())
            return it->second;
        State id = static_cast<State>(subsets.size());
        subset_id.emplace(s, id);
        subsets.push_back(std::move(s));
        return id;
    };

    State start = intern(eps_closure(idx, n.initial_states));
    std::vector<State> table;
    for (State q = 0; q < subsets.size(); ++q) {
        // copy: subsets may reallocate while we expand
        std::vector<State> current = subsets[q];
        for (char c : n.alphabet.symbols()) {
            State to = intern(eps_closure(idx, step_symbol(idx, current, c)));
            table.push_back(to);
        }
    }

    Dfa d;
    d.state_count = subsets.size();
    d.alphabet = n.alphabet;
    d.transition = std::move(table);
    d.initial = start;
    for (State q = 0; q < subsets.size(); ++q)
        for (State s : subsets[q])
            if (n.is_final(s)) {
                d.final_states.push_back(q);
                break;
            }
    d.normalize_and_validate();
    return d;
}

namespace {

/// Renumber a complete DFA by BFS discovery order from the initial state,
/// alphabet-order edges. All states must be reachable.
Dfa bfs_renumber(const Dfa& d) {
    const std::size_t k = d.alphabet.size();
    std::vector<State> order(d.state_count, UINT32_MAX);
    std::vector<State> bfs;
    order[d.initial] = 0;
    bfs.push_back(d.initial);
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            State to = d.next_by_index(bfs[i], a);
            if (order[to] == UINT32_MAX) {
                order[to] = static_cast<State>(bfs.size());
                bfs.push_back(to);
            }
        }

    Dfa out;
    out.state_count = bfs.size();
    out.alphabet = d.alphabet;
    out.initial = 0;
    out.transition.resize(bfs.size() * k);
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (std::size_t a = 0; a < k; ++a)
            out.transition[i * k + a] = order[d.next_by_index(bfs[i], a)];
    for (State q : d.final_states)
        if (order[q] != UINT32_MAX)
            out.final_states.push_back(order[q]);
    out.normalize_and_validate();
    return out;
}

} // namespace

Dfa minimize(const Dfa& d) {
    const std::size_t k = d.alphabet.size();

    // restrict to reachable states
    std::vector<State> remap(d.state_count, UINT32_MAX);
    std::vector<State> reach;
    remap[d.initial] = 0;
    reach.push_back(d.initial);
    for (std::size_t i = 0; i < reach.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            State to = d.next_by_index(reach[i], a);
            if (remap[to] == UINT32_MAX) {
                remap[to] = static_cast<State>(reach.size());
                reach.push_back(to);
            }
        }
    const std::size_t m = reach.size();

    // Moore partition refinement
    std::vector<std::uint32_t> cls(m);
    for (std::size_t i = 0; i < m; ++i)
        cls[i] = d.is_final(reach[i]) ? 1 : 0;
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig_to_class;
        std::vector<std::uint32_t> next(m);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<std::uint32_t> sig;
            sig.reserve(k + 1);
            sig.push_back(cls[i]);
            for (std::size_t a = 0; a < k; ++a)
                sig.push_back(cls[remap[d.next_by_index(reach[i], a)]]);
            auto [it, inserted] = sig_to_class.emplace(std::move(sig), 0);
            if (inserted)
                it->second = static_cast<std::uint32_t>(sig_to_class.size() - 1);
            next[i] = it->second;
        }
        bool changed = false;
        for (std::size_t i = 0; i < m && !changed; ++i)
            for (std::size_t j = i + 1; j < m && !changed; ++j)
                if ((cls[i] == cls[j]) != (next[i] == next[j]))
                    changed = true;
        cls = std::move(next);
        if (!changed)
            break;
    }

    std::uint32_t class_count = 0;
    for (std::uint32_t c : cls)
        class_count = std::max(class_count, c + 1);

    Dfa q;
    q.state_count = class_count;
    q.alphabet = d.alphabet;
    q.initial = cls[0]; // reach[0] == d.initial
    q.transition.assign(class_count * k, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < k; ++a)
            q.transition[cls[i] * k + a] = cls[remap[d.next_by_index(reach[i], a)]];
    for (std::size_t i = 0; i < m; ++i)
        if (d.is_final(reach[i]))
            q.final_states.push_back(cls[i]);
    q.normalize_and_validate();
    return bfs_renumber(q);
}

std::string dfa_key(const Dfa& d) {
    std::ostringstream os;
    os << d.state_count << '|' << d.alphabet.symbols() << '|' << d.initial << '|';
    for (State q : d.final_states)
        os << q << ',';
    os << '|';
    for (State t : d.transition)
        os << t << ',';
    return os.str();
}

bool dfa_equiv(const Dfa& a, const Dfa& b) {
    require_same_alphabet(a.alphabet, b.alphabet, "dfa_equiv");
    return minimize(a) == minimize(b);
}

Dfa canonical_dfa(const Nfa& n) { return minimize(determinize(n)); }

bool nfa_equiv(const Nfa& a, const Nfa& b) {
    require_same_alphabet(a.alphabet, b.alphabet, "nfa_equiv");
    return canonical_dfa(a) == canonical_dfa(b);
}

// ---- word extraction ----

std::optional<Word> shortest_accepted(const Nfa& n) {
    NfaIndex idx(n);
    auto accepting = [&](const std::vector<State>& s) {
        for (State q : s)
            if (n.is_final(q))
                return true;
        return false;
    };

    std::vector<State> start = eps_closure(idx, n.initial_states);
    if (accepting(start))
        return Word();

    // BFS over subset states, symbols in alphabet order: the queue is
    // ordered by (length, lex), so the first accepting subset dequeued
    // yields the length-lex least word.
    std::set<std::vector<State>> visited{start};
    std::deque<std::pair<std::vector<State>, Word>> queue{{start, Word()}};
    while (!queue.empty()) {
        auto [subset, word] = std::move(queue.front());
        queue.pop_front();
        for (char c : n.alphabet.symbols()) {
            auto next = eps_closure(idx, step_symbol(idx, subset, c));
            if (next.empty())
                continue;
            Word next_word = word.append(c);
            if (accepting(next))
                return next_word;
            if (visited.insert(next).second)
                queue.emplace_back(std::move(next), std::move(next_word));
        }
    }
    return std::nullopt;
}

namespace {

/// Equivalent epsilon-free NFA (same state count): symbol edges are pulled
/// through epsilon closures; a state is final if its closure meets a final.
Nfa eliminate_epsilon(const Nfa& n) {
    NfaIndex idx(n);
    Nfa out;
    out.state_count = n.state_count;
    out.alphabet = n.alphabet;
    out.initial_states = n.initial_states;
    for (State q = 0; q < n.state_count; ++q) {
        auto closure = eps_closure(idx, {q});
        bool fin = false;
        for (State r : closure) {
            if (n.is_final(r))
                fin = true;
            for (const auto& [label, to] : idx.symbol_edges[r])
                out.transitions.push_back({q, label, to});
        }
        if (fin)
            out.final_states.push_back(q);
    }
    out.normalize_and_validate();
    return out;
}

} // namespace

std::size_t longest_accepted_of_finite(const Nfa& n) {
    if (nfa_empty(n))
        throw PreconditionError("longest_accepted_of_finite: language is empty");
    if (!nfa_finite(n))
        throw PreconditionError("longest_accepted_of_finite: language is infinite");

    Nfa ef = eliminate_epsilon(n);
    auto reach = reachable_mask(ef, ef.initial_states);
    auto coreach = coreachable_mask(ef);
    std::vector<char> trim(ef.state_count);
    for (std::size_t q = 0; q < ef.state_count; ++q)
        trim[q] = reach[q] && coreach[q];

    // trim + epsilon-free + finite language => the symbol graph is acyclic;
    // longest path from an initial to a final state counts transitions.
    std::vector<std::vector<State>> adj(ef.state_count);
    std::vector<std::size_t> indeg(ef.state_count, 0);
    for (const auto& t : ef.transitions)
        if (trim[t.from] && trim[t.to]) {
            adj[t.from].push_back(t.to);
            ++indeg[t.to];
        }
    std::deque<State> topo_work;
    for (State q = 0; q < ef.state_count; ++q)
        if (trim[q] && indeg[q] == 0)
            topo_work.push_back(q);
    std::vector<State> topo;
    while (!topo_work.empty()) {
        State q = topo_work.front();
        topo_work.pop_front();
        topo.push_back(q);
        for (State r : adj[q])
            if (--indeg[r] == 0)
                topo_work.push_back(r);
    }

    std::vector<long long> best(ef.state_count, -1);
    for (State q : ef.initial_states)
        if (trim[q])
            best[q] = 0;
    for (State q : topo) {
        if (best[q] < 0)
            continue;
        for (State r : adj[q])
            best[r] = std::max(best[r], best[q] + 1);
    }
    long long longest = 0;
    for (State q : ef.final_states)
        if (trim[q])
            longest = std::max(longest, best[q]);
    return static_cast<std::size_t>(longest);
}

// ---- closure constructions ----

Nfa product_intersect(const Nfa& n, const Dfa& d) {
    require_same_alphabet(n.alphabet, d.alphabet, "product_intersect");
    const std::size_t cols = d.state_count;
    auto pair_id = [&](State a, State b) { return static_cast<State>(a * cols + b); };

    Nfa out;
    out.state_count = n.state_count * d.state_count;
    out.alphabet = n.alphabet;
    for (State q : n.initial_states)
        out.initial_states.push_back(pair_id(q, d.initial));
    for (State q : n.final_states)
        for (State f : d.final_states)
            out.final_states.push_back(pair_id(q, f));
    for (const auto& t : n.transitions) {
        for (State b = 0; b < d.state_count; ++b) {
            if (t.label.has_value())
                out.transitions.push_back({pair_id(t.from, b), t.label,
                                           pair_id(t.to, d.next(b, *t.label))});
            else
                out.transitions.push_back({pair_id(t.from, b), std::nullopt, pair_id(t.to, b)});
        }
    }
    out.normalize_and_validate();
    return out;
}

namespace {

void append_shifted(Nfa& dst, const Nfa& src, State offset) {
    for (const auto& t : src.transitions)
        dst.transitions.push_back({t.from + offset, t.label, t.to + offset});
}

} // namespace

Nfa concat_regular(const Nfa& n, const Nfa& r, ConcatSide side) {
    require_same_alphabet(n.alphabet, r.alphabet, "concat_regular");
    const Nfa& first = side == ConcatSide::Left ? r : n;
    const Nfa& second = side == ConcatSide::Left ? n : r;

    Nfa out;
    out.alphabet = n.alphabet;
    out.state_count = first.state_count + second.state_count;
    State off = static_cast<State>(first.state_count);
    append_shifted(out, first, 0);
    append_shifted(out, second, off);
    for (State q : first.initial_states)
        out.initial_states.push_back(q);
    for (State f : first.final_states)
        for (State i : second.initial_states)
            out.transitions.push_back({f, std::nullopt, i + off});
    for (State f : second.final_states)
        out.final_states.push_back(f + off);
    out.normalize_and_validate();
    return out;
}

Nfa nfa_union(const Nfa& a, const Nfa& b) {
    require_same_alphabet(a.alphabet, b.alphabet, "union");
    Nfa out;
    out.alphabet = a.alphabet;
    out.state_count = a.state_count + b.state_count;
    State off = static_cast<State>(a.state_count);
    append_shifted(out, a, 0);
    append_shifted(out, b, off);
    out.initial_states = a.initial_states;
    for (State q : b.initial_states)
        out.initial_states.push_back(q + off);
    out.final_states = a.final_states;
    for (State q : b.final_states)
        out.final_states.push_back(q + off);
    out.normalize_and_validate();
    return out;
}

const Word& MorphismMap::image(char c) const {
    auto it = images.find(c);
    if (it == images.end())
        throw AlphabetMismatch(std::string("morphism: no image for symbol '") + c + "'");
    return it->second;
}

Nfa morphism(const Nfa& n, const MorphismMap& h) {
    for (char c : n.alphabet.symbols())
        require_over(h.image(c), h.output, "morphism image");

    Nfa out;
    out.alphabet = h.output;
    out.state_count = n.state_count;
    out.initial_states = n.initial_states;
    out.final_states = n.final_states;
    State fresh = static_cast<State>(n.state_count);
    for (const auto& t : n.transitions) {
        if (!t.label.has_value()) {
            out.transitions.push_back({t.from, std::nullopt, t.to});
            continue;
        }
        const Word& img = h.image(*t.label);
        if (img.empty()) {
            out.transitions.push_back({t.from, std::nullopt, t.to});
            continue;
        }
        State prev = t.from;
        for (std::size_t i = 0; i + 1 < img.size(); ++i) {
            out.transitions.push_back({prev, img.at(i), fresh});
            prev = fresh++;
        }
        out.transitions.push_back({prev, img.at(img.size() - 1), t.to});
    }
    out.state_count = fresh;
    out.normalize_and_validate();
    return out;
}

Nfa inverse_morphism(const Nfa& n, const MorphismMap& h) {
    for (char c : h.output.symbols())
        require_over(h.image(c), n.alphabet, "inverse_morphism image");

    NfaIndex idx(n);
    auto read_word = [&](State q, const Word& w) {
        std::vector<State> cur = eps_closure(idx, {q});
        for (std::size_t i = 0; i < w.size() && !cur.empty(); ++i)
            cur = eps_closure(idx, step_symbol(idx, cur, w.at(i)));
        return cur;
    };

    Nfa out;
    out.alphabet = h.output;
    out.state_count = n.state_count;
    out.initial_states = n.initial_states;
    for (State q = 0; q < n.state_count; ++q) {
        for (char c : h.output.symbols())
            for (State to : read_word(q, h.image(c)))
                out.transitions.push_back({q, c, to});
        for (State r : eps_closure(idx, {q}))
            if (n.is_final(r)) {
                out.final_states.push_back(q);
                break;
            }
    }
    out.normalize_and_validate();
    return out;
}

Nfa regular_substitution(const Nfa& n, const std::function<const Nfa&(char)>& sigma) {
    Alphabet output;
    bool have_output = false;
    for (char c : n.alphabet.symbols()) {
        const Nfa& img = sigma(c);
        if (!have_output) {
            output = img.alphabet;
            have_output = true;
        } else if (img.alphabet != output) {
            throw AlphabetMismatch("regular_substitution: image alphabets differ");
        }
    }
    if (!have_output)
        throw AlphabetMismatch("regular_substitution: empty source alphabet");

    Nfa out;
    out.alphabet = output;
    out.state_count = n.state_count;
    out.initial_states = n.initial_states;
    out.final_states = n.final_states;
    for (const auto& t : n.transitions) {
        if (!t.label.has_value()) {
            out.transitions.push_back({t.from, std::nullopt, t.to});
            continue;
        }
        const Nfa& img = sigma(*t.label);
        State off = static_cast<State>(out.state_count);
        out.state_count += img.state_count;
        append_shifted(out, img, off);
        for (State q : img.initial_states)
            out.transitions.push_back({t.from, std::nullopt, q + off});
        for (State q : img.final_states)
            out.transitions.push_back({q + off, std::nullopt, t.to});
    }
    out.normalize_and_validate();
    return out;
}

Nfa up_closure(const Nfa& n) {
    Nfa out = n;
    for (State q = 0; q < n.state_count; ++q)
        for (char c : n.alphabet.symbols())
            out.transitions.push_back({q, c, q});
    out.normalize_and_validate();
    return out;
}

Nfa down_closure(const Nfa& n) {
    Nfa out = n;
    for (const auto& t : n.transitions)
        if (t.label.has_value())
            out.transitions.push_back({t.from, std::nullopt, t.to});
    out.normalize_and_validate();
    return out;
}

Nfa up_image_nfa(const Alphabet& alphabet, char a) {
    Nfa m;
    m.state_count = 2;
    m.alphabet = alphabet;
    m.initial_states = {0};
    m.final_states = {1};
    for (char c : alphabet.symbols()) {
        m.transitions.push_back({0, c, 0});
        m.transitions.push_back({1, c, 1});
    }
    m.transitions.push_back({0, a, 1});
    m.normalize_and_validate();
    return m;
}

Nfa down_image_nfa(const Alphabet& alphabet, char a) {
    Nfa m;
    m.state_count = 2;
    m.alphabet = alphabet;
    m.initial_states = {0};
    m.final_states = {0, 1};
    m.transitions.push_back({0, a, 1});
    m.normalize_and_validate();
    return m;
}

Nfa all_words_nfa(const Alphabet& alphabet) {
    Nfa m;
    m.state_count = 1;
    m.alphabet = alphabet;
    m.initial_states = {0};
    m.final_states = {0};
    for (char c : alphabet.symbols())
        m.transitions.push_back({0, c, 0});
    m.normalize_and_validate();
    return m;
}

Dfa nonempty_words_dfa(const Alphabet& alphabet) { return min_length_dfa(alphabet, 1); }

Dfa min_length_dfa(const Alphabet& alphabet, std::size_t k) {
    Dfa d;
    d.state_count = k + 1;
    d.alphabet = alphabet;
    d.initial = 0;
    d.final_states = {static_cast<State>(k)};
    for (std::size_t q = 0; q <= k; ++q)
        for (std::size_t a = 0; a < alphabet.size(); ++a)
            d.transition.push_back(static_cast<State>(std::min(q + 1, k)));
    d.normalize_and_validate();
    return d;
}

Nfa symbol_star_nfa(const Alphabet& alphabet, char a) {
    Nfa m;
    m.state_count = 1;
    m.alphabet = alphabet;
    m.initial_states = {0};
    m.final_states = {0};
    m.transitions.push_back({0, a, 0});
    m.normalize_and_validate();
    return m;
}

// ---- canonical enumeration ----

std::optional<std::uint64_t> nfa_enumeration_count(std::size_t n, const Alphabet& alphabet) {
    std::size_t bits = n * n * alphabet.size() + n;
    if (bits >= 63)
        return std::nullopt;
    return std::uint64_t{1} << bits;
}

std::optional<std::uint64_t> dfa_enumeration_count(std::size_t n, const Alphabet& alphabet) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n * alphabet.size(); ++i) {
        if (total > (std::uint64_t{1} << 62) / n)
            return std::nullopt;
        total *= n;
    }
    if (n >= 62 || total > (std::uint64_t{1} << 62) >> n)
        return std::nullopt;
    return total << n;
}

namespace {

/// Lexicographically least relabeling of an n-state machine encoding under
/// permutations of states 1..n-1 (state 0 is the fixed initial state).
/// Encodings are compared as (transition cells in canonical order, finals).
template <typename EncodeFn>
bool is_iso_canonical(std::size_t n, const EncodeFn& encode) {
    std::vector<State> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto base = encode(perm);
    // permute states 1..n-1 only
    std::vector<State> tail(perm.begin() + 1, perm.end());
    while (std::next_permutation(tail.begin(), tail.end())) {
        std::copy(tail.begin(), tail.end(), perm.begin() + 1);
        if (encode(perm) < base)
            return false;
    }
    return true;
}

} // namespace

void enumerate_nfas(std::size_t n, const Alphabet& alphabet, bool prune_isomorphic,
                    const std::function<bool(const Nfa&)>& emit) {
    if (n == 0)
        throw PreconditionError("enumerate_nfas: n must be >= 1");
    const std::size_t k = alphabet.size();
    const std::size_t cells = n * k * n; // (from, symbol, to) in lexicographic cell order
    if (cells + n >= 63)
        throw CeilingExceeded("2^" + std::to_string(cells + n), "enumerate_nfas: too many descriptors");

    // cell index c = (from * k + symbol) * n + to
    const std::uint64_t trans_limit = std::uint64_t{1} << cells;
    const std::uint64_t final_limit = std::uint64_t{1} << n;

    auto encode_under = [&](std::uint64_t trans_bits, std::uint64_t final_bits,
                            const std::vector<State>& perm) {
        // new cell (p,a,q) is set iff old cell (perm^-1 p, a, perm^-1 q) was;
        // equivalently map set cells forward through perm.
        std::uint64_t t2 = 0, f2 = 0;
        for (std::size_t c = 0; c < cells; ++c)
            if (trans_bits >> c & 1) {
                std::size_t to = c % n;
                std::size_t rest = c / n;
                std::size_t sym = rest % k;
                std::size_t from = rest / k;
                t2 |= std::uint64_t{1} << ((perm[from] * k + sym) * n + perm[to]);
            }
        for (std::size_t q = 0; q < n; ++q)
            if (final_bits >> q & 1)
                f2 |= std::uint64_t{1} << perm[q];
        return std::pair<std::uint64_t, std::uint64_t>(t2, f2);
    };

    for (std::uint64_t trans_bits = 0; trans_bits < trans_limit; ++trans_bits) {
        for (std::uint64_t final_bits = 0; final_bits < final_limit; ++final_bits) {
            if (prune_isomorphic && n > 1) {
                bool canonical = is_iso_canonical(n, [&](const std::vector<State>& perm) {
                    return encode_under(trans_bits, final_bits, perm);
                });
                if (!canonical)
                    continue;
            }
            Nfa m;
            m.state_count = n;
            m.alphabet = alphabet;
            m.initial_states = {0};
            for (std::size_t q = 0; q < n; ++q)
                if (final_bits >> q & 1)
                    m.final_states.push_back(static_cast<State>(q));
            for (std::size_t c = 0; c < cells; ++c)
                if (trans_bits >> c & 1) {
                    std::size_t to = c % n;
                    std::size_t rest = c / n;
                    std::size_t sym = rest % k;
                    std::size_t from = rest / k;
                    m.transitions.push_back({static_cast<State>(from), alphabet.symbol(sym),
                                             static_cast<State>(to)});
                }
            m.normalize_and_validate();
            if (!emit(m))
                return;
        }
    }
}

void enumerate_dfas(std::size_t n, const Alphabet& alphabet, bool prune_isomorphic,
                    const std::function<bool(const Dfa&)>& emit) {
    if (n == 0)
        throw PreconditionError("enumerate_dfas: n must be >= 1");
    if (n >= 32)
        throw CeilingExceeded(std::to_string(n) + "^" + std::to_string(n * alphabet.size()) +
                                  " * 2^" + std::to_string(n),
                              "enumerate_dfas: too many descriptors");
    const std::size_t k = alphabet.size();
    const std::size_t cells = n * k;

    auto encode_under = [&](const std::vector<State>& table, std::uint64_t final_bits,
                            const std::vector<State>& perm) {
        std::vector<State> inv(n);
        for (std::size_t q = 0; q < n; ++q)
            inv[perm[q]] = static_cast<State>(q);
        std::vector<State> t2(cells);
        for (std::size_t q = 0; q < n; ++q)
            for (std::size_t a = 0; a < k; ++a)
                t2[q * k + a] = perm[table[inv[q] * k + a]];
        std::uint64_t f2 = 0;
        for (std::size_t q = 0; q < n; ++q)
            if (final_bits >> q & 1)
                f2 |= std::uint64_t{1} << perm[q];
        return std::pair<std::vector<State>, std::uint64_t>(std::move(t2), f2);
    };

    // transition-table-major order: row-major targets as a big-endian
    // odometer (cell (0, a0) most significant), then final sets.
    std::vector<State> table(cells, 0);
    const std::uint64_t final_limit = std::uint64_t{1} << n;
    for (;;) {
        for (std::uint64_t final_bits = 0; final_bits < final_limit; ++final_bits) {
            if (prune_isomorphic && n > 1) {
                bool canonical = is_iso_canonical(n, [&](const std::vector<State>& perm) {
                    return encode_under(table, final_bits, perm);
                });
                if (!canonical)
                    continue;
            }
            Dfa d;
            d.state_count = n;
            d.alphabet = alphabet;
            d.initial = 0;
            d.transition = table;
            for (std::size_t q = 0; q < n; ++q)
                if (final_bits >> q & 1)
                    d.final_states.push_back(static_cast<State>(q));
            d.normalize_and_validate();
            if (!emit(d))
                return;
        }
        // advance odometer (last cell fastest)
        std::size_t pos = cells;
        while (pos > 0) {
            --pos;
            if (table[pos] + 1 < n) {
                ++table[pos];
                std::fill(table.begin() + pos + 1, table.end(), 0);
                break;
            }
            if (pos == 0)
                return;
        }
    }
}

// ---- text format ----

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok)
        out.push_back(tok);
    return out;
}

struct RawAutomaton {
    std::optional<std::size_t> states;
    std::optional<Alphabet> alphabet;
    std::vector<State> initial;
    bool saw_initial = false;
    std::vector<State> final;
    bool saw_final = false;
    std::vector<Transition> transitions;
};

State parse_state(const std::string& tok, std::size_t states, std::size_t line) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(tok, &pos);
    } catch (const std::exception&) {
        throw ParseError(line, "expected a state index, got '" + tok + "'");
    }
    if (pos != tok.size())
        throw ParseError(line, "expected a state index, got '" + tok + "'");
    if (v >= states)
        throw ParseError(line, "state index " + tok + " out of range (states: " +
                                   std::to_string(states) + ")");
    return static_cast<State>(v);
}

RawAutomaton parse_raw(const std::string& text, const char* kind) {
    RawAutomaton raw;
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '#')
            continue; // header/comment line
        auto toks = split_ws(line);
        if (toks.empty())
            continue;
        const std::string& key = toks[0];
        auto need_states = [&]() -> std::size_t {
            if (!raw.states)
                throw ParseError(lineno, "'states:' must come before '" + key + "'");
            return *raw.states;
        };
        if (key == "states:") {
            if (toks.size() != 2)
                throw ParseError(lineno, "expected 'states: <n>'");
            try {
                raw.states = std::stoul(toks[1]);
            } catch (const std::exception&) {
                throw ParseError(lineno, "expected a number after 'states:'");
            }
            if (*raw.states == 0)
                throw ParseError(lineno, "automaton must have at least one state");
        } else if (key == "alphabet:") {
            if (toks.size() != 2)
                throw ParseError(lineno, "expected 'alphabet: <symbols>'");
            try {
                raw.alphabet = Alphabet(toks[1]);
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
        } else if (key == "initial:") {
            raw.saw_initial = true;
            for (std::size_t i = 1; i < toks.size(); ++i)
                raw.initial.push_back(parse_state(toks[i], need_states(), lineno));
        } else if (key == "final:") {
            raw.saw_final = true;
            for (std::size_t i = 1; i < toks.size(); ++i)
                raw.final.push_back(parse_state(toks[i], need_states(), lineno));
        } else if (key == "trans:") {
            if (toks.size() != 4)
                throw ParseError(lineno, "expected 'trans: <from> <label> <to>'");
            if (!raw.alphabet)
                throw ParseError(lineno, "'alphabet:' must come before 'trans:'");
            State from = parse_state(toks[1], need_states(), lineno);
            State to = parse_state(toks[3], need_states(), lineno);
            std::optional<char> label;
            if (toks[2] == "_") {
                label = std::nullopt;
            } else if (toks[2].size() == 1 && raw.alphabet->contains(toks[2][0])) {
                label = toks[2][0];
            } else {
                throw ParseError(lineno, "transition label '" + toks[2] +
                                             "' is neither '_' nor an alphabet symbol");
            }
            raw.transitions.push_back({from, label, to});
        } else {
            throw ParseError(lineno, std::string("unknown ") + kind + " line '" + key + "'");
        }
    }
    if (!raw.states)
        throw ParseError(lineno == 0 ? 1 : lineno, "missing 'states:' line");
    if (!raw.alphabet)
        throw ParseError(lineno, "missing 'alphabet:' line");
    if (!raw.saw_initial)
        throw ParseError(lineno, "missing 'initial:' line");
    return raw;
}

} // namespace

Nfa parse_nfa(const std::string& text) {
    RawAutomaton raw = parse_raw(text, "nfa");
    Nfa n;
    n.state_count = *raw.states;
    n.alphabet = *raw.alphabet;
    n.transitions = std::move(raw.transitions);
    n.initial_states = std::move(raw.initial);
    n.final_states = std::move(raw.final);
    try {
        n.normalize_and_validate();
    } catch (const std::exception& e) {
        throw ParseError(1, e.what());
    }
    return n;
}

Dfa parse_dfa(const std::string& text) {
    RawAutomaton raw = parse_raw(text, "dfa");
    if (raw.initial.size() != 1)
        throw ParseError(1, "dfa must have exactly one initial state");
    const std::size_t n = *raw.states;
    const Alphabet& alphabet = *raw.alphabet;
    std::vector<std::optional<State>> table(n * alphabet.size());
    for (const auto& t : raw.transitions) {
        if (!t.label.has_value())
            throw ParseError(1, "dfa may not contain epsilon transitions");
        auto& cell = table[t.from * alphabet.size() + alphabet.index(*t.label)];
        if (cell.has_value() && *cell != t.to)
            throw ParseError(1, "dfa has conflicting transitions from state " +
                                    std::to_string(t.from) + " on '" + *t.label + "'");
        cell = t.to;
    }
    Dfa d;
    d.state_count = n;
    d.alphabet = alphabet;
    d.initial = raw.initial[0];
    d.final_states = std::move(raw.final);
    d.transition.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!table[i].has_value())
            throw ParseError(1, "dfa transition table incomplete: state " +
                                    std::to_string(i / alphabet.size()) + " on '" +
                                    alphabet.symbol(i % alphabet.size()) + "'");
        d.transition.push_back(*table[i]);
    }
    try {
        d.normalize_and_validate();
    } catch (const std::exception& e) {
        throw ParseError(1, e.what());
    }
    return d;
}

std::string nfa_to_text(const Nfa& n) {
    std::ostringstream os;
    os << "#nfa\n";
    os << "states: " << n.state_count << "\n";
    os << "alphabet: " << n.alphabet.symbols() << "\n";
    os << "initial:";
    for (State q : n.initial_states)
        os << ' ' << q;
    os << "\n";
    os << "final:";
    for (State q : n.final_states)
        os << ' ' << q;
    os << "\n";
    for (const auto& t : n.transitions)
        os << "trans: " << t.from << ' ' << (t.label ? std::string(1, *t.label) : "_") << ' '
           << t.to << "\n";
    return os.str();
}

std::string dfa_to_text(const Dfa& d) {
    std::ostringstream os;
    os << "#dfa\n";
    os << "states: " << d.state_count << "\n";
    os << "alphabet: " << d.alphabet.symbols() << "\n";
    os << "initial: " << d.initial << "\n";
    os << "final:";
    for (State q : d.final_states)
        os << ' ' << q;
    os << "\n";
    for (std::size_t q = 0; q < d.state_count; ++q)
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
            os << "trans: " << q << ' ' << d.alphabet.symbol(a) << ' '
               << d.next_by_index(static_cast<State>(q), a) << "\n";
    return os.str();
}

Nfa dfa_to_nfa(const Dfa& d) {
    Nfa n;
    n.state_count = d.state_count;
    n.alphabet = d.alphabet;
    n.initial_states = {d.initial};
    n.final_states = d.final_states;
    for (std::size_t q = 0; q < d.state_count; ++q)
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
            n.transitions.push_back({static_cast<State>(q), d.alphabet.symbol(a),
                                     d.next_by_index(static_cast<State>(q), a)});
    n.normalize_and_validate();
    return n;
}

} // namespace descomp
