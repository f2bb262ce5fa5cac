#include "descomp/grammars.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace descomp {

namespace {

bool valid_nt_name(const std::string& name) {
    if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0])))
        return false;
    for (char c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)))
            return false;
    return true;
}

/// Hands out names that are unused so far; collisions get a numeric suffix.
class NameGen {
public:
    explicit NameGen(const std::vector<std::string>& existing)
        : used_(existing.begin(), existing.end()) {}

    std::string fresh(const std::string& base) {
        if (used_.insert(base).second)
            return base;
        for (std::size_t k = 0;; ++k) {
            std::string candidate = base + std::to_string(k);
            if (used_.insert(candidate).second)
                return candidate;
        }
    }

private:
    std::set<std::string> used_;
};

std::vector<char> productive_mask(const Cfg& g) {
    std::vector<char> productive(g.nonterminals.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            if (productive[p.head])
                continue;
            bool all = true;
            for (const auto& s : p.body)
                if (!s.terminal && !productive[s.nt]) {
                    all = false;
                    break;
                }
            if (all) {
                productive[p.head] = 1;
                changed = true;
            }
        }
    }
    return productive;
}

std::vector<char> reachable_mask(const Cfg& g) {
    std::vector<char> reachable(g.nonterminals.size(), 0);
    reachable[g.start] = 1;
    std::deque<std::uint32_t> work{g.start};
    while (!work.empty()) {
        std::uint32_t a = work.front();
        work.pop_front();
        for (const auto& p : g.productions)
            if (p.head == a)
                for (const auto& s : p.body)
                    if (!s.terminal && !reachable[s.nt]) {
                        reachable[s.nt] = 1;
                        work.push_back(s.nt);
                    }
    }
    return reachable;
}

/// Keeps only productions whose head is useful and whose body mentions only
/// useful nonterminals (productive first, then reachable). Nonterminal
/// indices are preserved; the start stays even when useless.
Cfg trim(const Cfg& g) {
    auto productive = productive_mask(g);
    Cfg mid = g;
    mid.productions.clear();
    for (const auto& p : g.productions) {
        if (!productive[p.head])
            continue;
        bool ok = true;
        for (const auto& s : p.body)
            if (!s.terminal && !productive[s.nt])
                ok = false;
        if (ok)
            mid.productions.push_back(p);
    }
    auto reachable = reachable_mask(mid);
    Cfg out = mid;
    out.productions.clear();
    for (const auto& p : mid.productions)
        if (reachable[p.head])
            out.productions.push_back(p);
    return out;
}

std::vector<char> nullable_mask(const Cfg& g) {
    std::vector<char> nullable(g.nonterminals.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            if (nullable[p.head])
                continue;
            bool all = true;
            for (const auto& s : p.body)
                if (s.terminal || !nullable[s.nt]) {
                    all = false;
                    break;
                }
            if (all) {
                nullable[p.head] = 1;
                changed = true;
            }
        }
    }
    return nullable;
}

void dedupe_productions(std::vector<Production>& ps) {
    std::vector<Production> out;
    for (const auto& p : ps) {
        bool dup = false;
        for (const auto& q : out)
            if (p == q) {
                dup = true;
                break;
            }
        if (!dup)
            out.push_back(p);
    }
    ps = std::move(out);
}

/// Reorders nonterminals and productions into the order the text format
/// round-trips through: start first, then heads by first production
/// occurrence, then body-only nonterminals; productions grouped by head.
Cfg reorder_for_print(const Cfg& g) {
    std::vector<std::uint32_t> head_order{g.start};
    auto in_heads = [&](std::uint32_t h) {
        return std::find(head_order.begin(), head_order.end(), h) != head_order.end();
    };
    for (const auto& p : g.productions)
        if (!in_heads(p.head))
            head_order.push_back(p.head);

    std::vector<Production> sorted;
    for (std::uint32_t h : head_order)
        for (const auto& p : g.productions)
            if (p.head == h)
                sorted.push_back(p);

    std::vector<std::uint32_t> order = head_order;
    auto in_order = [&](std::uint32_t i) {
        return std::find(order.begin(), order.end(), i) != order.end();
    };
    for (const auto& p : sorted)
        for (const auto& s : p.body)
            if (!s.terminal && !in_order(s.nt))
                order.push_back(s.nt);
    // nonterminals that appear nowhere are invisible to the text format and
    // are dropped (the start stays)

    std::vector<std::uint32_t> remap(g.nonterminals.size(), UINT32_MAX);
    for (std::uint32_t pos = 0; pos < order.size(); ++pos)
        remap[order[pos]] = pos;

    Cfg out;
    out.terminals = g.terminals;
    out.start = 0;
    out.nonterminals.resize(order.size());
    for (std::uint32_t pos = 0; pos < order.size(); ++pos)
        out.nonterminals[pos] = g.nonterminals[order[pos]];
    for (const auto& p : sorted) {
        Production q{remap[p.head], {}};
        for (const auto& s : p.body)
            q.body.push_back(s.terminal ? s : GrammarSymbol::n(remap[s.nt]));
        out.productions.push_back(std::move(q));
    }
    return out;
}

/// Removes λ-productions; the resulting grammar generates L(g) \ {λ}.
Cfg eliminate_lambda(const Cfg& g) {
    auto nullable = nullable_mask(g);
    Cfg out = g;
    out.productions.clear();
    for (const auto& p : g.productions) {
        std::vector<std::size_t> optional_positions;
        for (std::size_t i = 0; i < p.body.size(); ++i)
            if (!p.body[i].terminal && nullable[p.body[i].nt])
                optional_positions.push_back(i);
        const std::size_t variants = std::size_t{1} << optional_positions.size();
        for (std::size_t v = 0; v < variants; ++v) {
            Production q{p.head, {}};
            std::size_t opt = 0;
            for (std::size_t i = 0; i < p.body.size(); ++i) {
                if (opt < optional_positions.size() && optional_positions[opt] == i) {
                    bool drop = (v >> opt) & 1;
                    ++opt;
                    if (drop)
                        continue;
                }
                q.body.push_back(p.body[i]);
            }
            if (!q.body.empty())
                out.productions.push_back(q);
        }
    }
    dedupe_productions(out.productions);
    return out;
}

/// Removes unit productions (language-preserving on λ-free grammars).
Cfg eliminate_units(const Cfg& g) {
    const std::size_t n = g.nonterminals.size();
    // unit_closure[a] = set of b with a =>* b via unit productions
    std::vector<std::vector<char>> closure(n, std::vector<char>(n, 0));
    for (std::size_t a = 0; a < n; ++a)
        closure[a][a] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions)
            if (p.body.size() == 1 && !p.body[0].terminal)
                for (std::size_t a = 0; a < n; ++a)
                    if (closure[a][p.head] && !closure[a][p.body[0].nt]) {
                        closure[a][p.body[0].nt] = 1;
                        changed = true;
                    }
    }
    Cfg out = g;
    out.productions.clear();
    for (std::size_t a = 0; a < n; ++a)
        for (const auto& p : g.productions) {
            if (!closure[a][p.head])
                continue;
            if (p.body.size() == 1 && !p.body[0].terminal)
                continue;
            out.productions.push_back({static_cast<std::uint32_t>(a), p.body});
        }
    dedupe_productions(out.productions);
    return out;
}

} // namespace

void Cfg::validate() const {
    if (nonterminals.empty())
        throw std::invalid_argument("cfg: must declare at least one nonterminal");
    if (start >= nonterminals.size())
        throw std::invalid_argument("cfg: start symbol out of range");
    std::set<std::string> names;
    for (const auto& name : nonterminals) {
        if (!valid_nt_name(name))
            throw std::invalid_argument("cfg: invalid nonterminal name '" + name + "'");
        if (!names.insert(name).second)
            throw std::invalid_argument("cfg: duplicate nonterminal name '" + name + "'");
    }
    for (const auto& p : productions) {
        if (p.head >= nonterminals.size())
            throw std::invalid_argument("cfg: production head out of range");
        for (const auto& s : p.body) {
            if (s.terminal) {
                if (!terminals.contains(s.term))
                    throw std::invalid_argument(std::string("cfg: terminal '") + s.term +
                                                "' not in alphabet");
            } else if (s.nt >= nonterminals.size()) {
                throw std::invalid_argument("cfg: body nonterminal out of range");
            }
        }
    }
}

std::optional<std::uint32_t> Cfg::nt_index(const std::string& name) const {
    for (std::size_t i = 0; i < nonterminals.size(); ++i)
        if (nonterminals[i] == name)
            return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

std::size_t cfg_size(const Cfg& g) {
    std::size_t total = 0;
    for (const auto& p : g.productions)
        total += 1 + p.body.size();
    return total;
}

bool cfg_empty(const Cfg& g) { return !productive_mask(g)[g.start]; }

bool cfg_finite(const Cfg& g) {
    Cfg t = trim(g);
    if (cfg_empty(t))
        return true;
    Cfg proper = eliminate_units(eliminate_lambda(t));
    proper = trim(proper);

    // dependency digraph: A -> B iff B occurs in a body of A. In a trim,
    // λ-free, unit-free grammar a cycle pumps at least one terminal.
    const std::size_t n = proper.nonterminals.size();
    std::vector<std::set<std::uint32_t>> adj(n);
    for (const auto& p : proper.productions)
        for (const auto& s : p.body)
            if (!s.terminal)
                adj[p.head].insert(s.nt);

    // cycle detection by iterative DFS coloring
    std::vector<int> color(n, 0);
    for (std::size_t root = 0; root < n; ++root) {
        if (color[root] != 0)
            continue;
        std::vector<std::pair<std::uint32_t, std::set<std::uint32_t>::iterator>> stack;
        color[root] = 1;
        stack.emplace_back(static_cast<std::uint32_t>(root), adj[root].begin());
        while (!stack.empty()) {
            auto& [node, it] = stack.back();
            if (it == adj[node].end()) {
                color[node] = 2;
                stack.pop_back();
                continue;
            }
            std::uint32_t next = *it;
            ++it;
            if (color[next] == 1)
                return false; // back edge: cycle
            if (color[next] == 0) {
                color[next] = 1;
                stack.emplace_back(next, adj[next].begin());
            }
        }
    }
    return true;
}

// ---- CNF and membership ----

namespace {

struct CnfRules {
    std::uint32_t nt_count = 0;
    std::uint32_t start = 0;
    bool accepts_lambda = false;
    std::vector<std::pair<std::uint32_t, char>> term_rules;
    std::vector<std::array<std::uint32_t, 3>> bin_rules;
};

CnfRules build_cnf(const Cfg& g) {
    g.validate();

    // working copy over plain indices; names no longer matter here
    std::uint32_t nt_count = static_cast<std::uint32_t>(g.nonterminals.size());
    std::vector<Production> prods = g.productions;

    // fresh start
    std::uint32_t start = nt_count++;
    prods.push_back({start, {GrammarSymbol::n(g.start)}});

    // terminal lifting in bodies of length >= 2
    std::map<char, std::uint32_t> lifted;
    for (auto& p : prods) {
        if (p.body.size() < 2)
            continue;
        for (auto& s : p.body) {
            if (!s.terminal)
                continue;
            auto it = lifted.find(s.term);
            if (it == lifted.end())
                it = lifted.emplace(s.term, nt_count++).first;
            s = GrammarSymbol::n(it->second);
        }
    }
    for (const auto& [term, nt] : lifted)
        prods.push_back({nt, {GrammarSymbol::t(term)}});

    // binarization
    std::vector<Production> binarized;
    for (const auto& p : prods) {
        if (p.body.size() <= 2) {
            binarized.push_back(p);
            continue;
        }
        std::uint32_t prev = p.head;
        for (std::size_t i = 0; i + 2 < p.body.size(); ++i) {
            std::uint32_t cont = nt_count++;
            binarized.push_back({prev, {p.body[i], GrammarSymbol::n(cont)}});
            prev = cont;
        }
        binarized.push_back({prev, {p.body[p.body.size() - 2], p.body[p.body.size() - 1]}});
    }

    Cfg work;
    work.terminals = g.terminals;
    work.start = start;
    work.nonterminals.resize(nt_count);
    for (std::uint32_t i = 0; i < nt_count; ++i)
        work.nonterminals[i] = "X" + std::to_string(i);
    work.productions = std::move(binarized);

    bool accepts_lambda = nullable_mask(work)[start];
    work = eliminate_units(eliminate_lambda(work));

    CnfRules rules;
    rules.nt_count = nt_count;
    rules.start = start;
    rules.accepts_lambda = accepts_lambda;
    for (const auto& p : work.productions) {
        if (p.body.size() == 1 && p.body[0].terminal) {
            rules.term_rules.emplace_back(p.head, p.body[0].term);
        } else if (p.body.size() == 2 && !p.body[0].terminal && !p.body[1].terminal) {
            rules.bin_rules.push_back({p.head, p.body[0].nt, p.body[1].nt});
        }
        // other shapes cannot remain after the pipeline
    }
    return rules;
}

class NtBitset {
public:
    NtBitset(std::size_t cells, std::uint32_t bits)
        : words_((bits + 63) / 64), data_(cells * words_, 0) {}
    bool get(std::size_t cell, std::uint32_t bit) const {
        return data_[cell * words_ + bit / 64] >> (bit % 64) & 1;
    }
    void set(std::size_t cell, std::uint32_t bit) {
        data_[cell * words_ + bit / 64] |= std::uint64_t{1} << (bit % 64);
    }

private:
    std::size_t words_;
    std::vector<std::uint64_t> data_;
};

} // namespace

CnfForm::CnfForm(const Cfg& g) : terminals_(g.terminals) {
    CnfRules rules = build_cnf(g);
    accepts_lambda_ = rules.accepts_lambda;
    nt_count_ = rules.nt_count;
    start_ = rules.start;
    terminal_rules_ = std::move(rules.term_rules);
    binary_rules_ = std::move(rules.bin_rules);
}

bool CnfForm::member(const Word& w) const {
    require_over(w, terminals_, "cfg_member");
    if (w.empty())
        return accepts_lambda_;
    const std::size_t L = w.size();
    auto cell = [L](std::size_t i, std::size_t len) { return (len - 1) * L + i; };
    NtBitset table(L * L, nt_count_);
    for (std::size_t i = 0; i < L; ++i)
        for (const auto& [head, term] : terminal_rules_)
            if (term == w.at(i))
                table.set(cell(i, 1), head);
    for (std::size_t len = 2; len <= L; ++len)
        for (std::size_t i = 0; i + len <= L; ++i)
            for (const auto& r : binary_rules_) {
                if (table.get(cell(i, len), r[0]))
                    continue;
                for (std::size_t split = 1; split < len; ++split)
                    if (table.get(cell(i, split), r[1]) &&
                        table.get(cell(i + split, len - split), r[2])) {
                        table.set(cell(i, len), r[0]);
                        break;
                    }
            }
    return table.get(cell(0, L), start_);
}

bool cfg_member(const Cfg& g, const Word& w) { return CnfForm(g).member(w); }

// ---- closure constructions ----

Cfg regular_substitution_cfg(const Cfg& g, const std::function<const Nfa&(char)>& sigma) {
    g.validate();
    Alphabet output;
    bool have_output = false;
    for (char c : g.terminals.symbols()) {
        const Nfa& img = sigma(c);
        if (!have_output) {
            output = img.alphabet;
            have_output = true;
        } else if (img.alphabet != output) {
            throw AlphabetMismatch("regular_substitution_cfg: image alphabets differ");
        }
    }
    if (!have_output)
        throw AlphabetMismatch("regular_substitution_cfg: empty terminal alphabet");

    Cfg out;
    out.terminals = output;
    out.nonterminals = g.nonterminals;
    out.start = g.start;
    NameGen names(g.nonterminals);

    // head nonterminal per terminal + one nonterminal per image NFA state
    std::map<char, std::uint32_t> head_of;
    for (std::size_t t = 0; t < g.terminals.size(); ++t) {
        char c = g.terminals.symbol(t);
        const Nfa& img = sigma(c);
        std::uint32_t head = static_cast<std::uint32_t>(out.nonterminals.size());
        out.nonterminals.push_back(names.fresh("U" + std::to_string(t)));
        head_of[c] = head;
        std::uint32_t state_base = static_cast<std::uint32_t>(out.nonterminals.size());
        for (std::size_t q = 0; q < img.state_count; ++q)
            out.nonterminals.push_back(
                names.fresh("U" + std::to_string(t) + "Q" + std::to_string(q)));
        for (State q : img.initial_states)
            out.productions.push_back({head, {GrammarSymbol::n(state_base + q)}});
        for (const auto& tr : img.transitions) {
            Production p{state_base + tr.from, {}};
            if (tr.label.has_value())
                p.body.push_back(GrammarSymbol::t(*tr.label));
            p.body.push_back(GrammarSymbol::n(state_base + tr.to));
            out.productions.push_back(p);
        }
        for (State q : img.final_states)
            out.productions.push_back({state_base + q, {}});
    }

    // original productions with terminals rerouted through the image heads
    for (const auto& p : g.productions) {
        Production q{p.head, {}};
        for (const auto& s : p.body)
            q.body.push_back(s.terminal ? GrammarSymbol::n(head_of[s.term]) : s);
        out.productions.push_back(q);
    }
    dedupe_productions(out.productions);
    out.validate();
    return out;
}

Cfg cfg_up(const Cfg& g) {
    std::map<char, Nfa> images;
    for (char c : g.terminals.symbols())
        images.emplace(c, up_image_nfa(g.terminals, c));
    Cfg substituted = regular_substitution_cfg(
        g, [&](char c) -> const Nfa& { return images.at(c); });
    // the substitution image of λ is λ; appending A* makes the result Up(L)
    // for every L, including those containing λ
    return cfg_concat_regular(substituted, all_words_nfa(g.terminals), ConcatSide::Right);
}

Cfg cfg_down(const Cfg& g) {
    std::map<char, Nfa> images;
    for (char c : g.terminals.symbols())
        images.emplace(c, down_image_nfa(g.terminals, c));
    return regular_substitution_cfg(g, [&](char c) -> const Nfa& { return images.at(c); });
}

Cfg bar_hillel(const Cfg& g, const Dfa& d) {
    if (g.terminals != d.alphabet)
        throw AlphabetMismatch("bar_hillel: grammar and automaton alphabets differ");
    CnfRules cnf = build_cnf(g);
    const std::uint32_t Q = static_cast<std::uint32_t>(d.state_count);
    const std::uint32_t N = cnf.nt_count;

    // triple (p, A, q) indexed densely; one extra start symbol at the end
    auto triple = [&](std::uint32_t p, std::uint32_t a, std::uint32_t q) {
        return (p * N + a) * Q + q;
    };
    const std::uint32_t start_id = Q * N * Q;

    Cfg out;
    out.terminals = g.terminals;
    out.start = start_id;
    out.nonterminals.resize(start_id + 1);
    for (std::uint32_t p = 0; p < Q; ++p)
        for (std::uint32_t a = 0; a < N; ++a)
            for (std::uint32_t q = 0; q < Q; ++q)
                out.nonterminals[triple(p, a, q)] = "T" + std::to_string(p) + "X" +
                                                    std::to_string(a) + "Q" + std::to_string(q);
    out.nonterminals[start_id] = "S";

    for (const auto& r : cnf.bin_rules)
        for (std::uint32_t p = 0; p < Q; ++p)
            for (std::uint32_t mid = 0; mid < Q; ++mid)
                for (std::uint32_t q = 0; q < Q; ++q)
                    out.productions.push_back({triple(p, r[0], q),
                                               {GrammarSymbol::n(triple(p, r[1], mid)),
                                                GrammarSymbol::n(triple(mid, r[2], q))}});
    for (const auto& [head, term] : cnf.term_rules)
        for (std::uint32_t p = 0; p < Q; ++p)
            out.productions.push_back(
                {triple(p, head, d.next(static_cast<State>(p), term)),
                 {GrammarSymbol::t(term)}});
    for (State f : d.final_states)
        out.productions.push_back(
            {start_id, {GrammarSymbol::n(triple(d.initial, cnf.start, f))}});
    if (cnf.accepts_lambda && d.is_final(d.initial))
        out.productions.push_back({start_id, {}});

    // compact: drop useless triples, renumber, regenerate names
    Cfg trimmed = trim(out);
    std::vector<std::uint32_t> remap(trimmed.nonterminals.size(), UINT32_MAX);
    std::uint32_t next_id = 0;
    remap[trimmed.start] = next_id++;
    for (const auto& p : trimmed.productions) {
        if (remap[p.head] == UINT32_MAX)
            remap[p.head] = next_id++;
        for (const auto& s : p.body)
            if (!s.terminal && remap[s.nt] == UINT32_MAX)
                remap[s.nt] = next_id++;
    }
    Cfg compact;
    compact.terminals = out.terminals;
    compact.start = 0;
    compact.nonterminals.resize(next_id);
    for (std::uint32_t i = 0; i < next_id; ++i)
        compact.nonterminals[i] = i == 0 ? "S" : "X" + std::to_string(i);
    for (const auto& p : trimmed.productions) {
        Production q{remap[p.head], {}};
        for (const auto& s : p.body)
            q.body.push_back(s.terminal ? s : GrammarSymbol::n(remap[s.nt]));
        compact.productions.push_back(q);
    }
    // group alternatives by head in first-appearance order
    std::stable_sort(compact.productions.begin(), compact.productions.end(),
                     [](const Production& a, const Production& b) { return a.head < b.head; });
    compact.validate();
    return compact;
}

Cfg cfg_concat_regular(const Cfg& g, const Nfa& r, ConcatSide side) {
    if (g.terminals != r.alphabet)
        throw AlphabetMismatch("cfg_concat_regular: alphabets differ");
    g.validate();

    Cfg out = g;
    NameGen names(g.nonterminals);

    // right-linear encoding of L(r)
    std::uint32_t r_head = static_cast<std::uint32_t>(out.nonterminals.size());
    out.nonterminals.push_back(names.fresh("R"));
    std::uint32_t state_base = static_cast<std::uint32_t>(out.nonterminals.size());
    for (std::size_t q = 0; q < r.state_count; ++q)
        out.nonterminals.push_back(names.fresh("R" + std::to_string(q)));
    for (State q : r.initial_states)
        out.productions.push_back({r_head, {GrammarSymbol::n(state_base + q)}});
    for (const auto& t : r.transitions) {
        Production p{state_base + t.from, {}};
        if (t.label.has_value())
            p.body.push_back(GrammarSymbol::t(*t.label));
        p.body.push_back(GrammarSymbol::n(state_base + t.to));
        out.productions.push_back(p);
    }
    for (State q : r.final_states)
        out.productions.push_back({state_base + q, {}});

    std::uint32_t new_start = static_cast<std::uint32_t>(out.nonterminals.size());
    out.nonterminals.push_back(names.fresh("S"));
    if (side == ConcatSide::Left)
        out.productions.push_back(
            {new_start, {GrammarSymbol::n(r_head), GrammarSymbol::n(g.start)}});
    else
        out.productions.push_back(
            {new_start, {GrammarSymbol::n(g.start), GrammarSymbol::n(r_head)}});
    out.start = new_start;
    out.validate();
    return out;
}

Cfg cfg_union(const Cfg& a, const Cfg& b) {
    if (a.terminals != b.terminals)
        throw AlphabetMismatch("cfg_union: alphabets differ");
    a.validate();
    b.validate();

    Cfg out = a;
    NameGen names(a.nonterminals);
    std::uint32_t off = static_cast<std::uint32_t>(a.nonterminals.size());
    for (const auto& name : b.nonterminals)
        out.nonterminals.push_back(names.fresh(name));
    for (const auto& p : b.productions) {
        Production q{p.head + off, {}};
        for (const auto& s : p.body)
            q.body.push_back(s.terminal ? s : GrammarSymbol::n(s.nt + off));
        out.productions.push_back(q);
    }
    std::uint32_t new_start = static_cast<std::uint32_t>(out.nonterminals.size());
    out.nonterminals.push_back(names.fresh("S"));
    out.productions.push_back({new_start, {GrammarSymbol::n(a.start)}});
    out.productions.push_back({new_start, {GrammarSymbol::n(b.start + off)}});
    out.start = new_start;
    out.validate();
    return out;
}

Cfg cfg_morphism(const Cfg& g, const MorphismMap& h) {
    g.validate();
    for (char c : g.terminals.symbols())
        require_over(h.image(c), h.output, "cfg_morphism image");
    Cfg out = g;
    out.terminals = h.output;
    out.productions.clear();
    for (const auto& p : g.productions) {
        Production q{p.head, {}};
        for (const auto& s : p.body) {
            if (!s.terminal) {
                q.body.push_back(s);
                continue;
            }
            const Word& img = h.image(s.term);
            for (std::size_t i = 0; i < img.size(); ++i)
                q.body.push_back(GrammarSymbol::t(img.at(i)));
        }
        out.productions.push_back(q);
    }
    out.validate();
    return out;
}

std::optional<Word> shortest_generated(const Cfg& g) {
    g.validate();
    std::vector<std::optional<Word>> best(g.nonterminals.size());
    auto better = [&](const Word& cand, const std::optional<Word>& cur) {
        return !cur.has_value() || length_lex_less(cand, *cur, g.terminals);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions) {
            std::string cand;
            bool ok = true;
            for (const auto& s : p.body) {
                if (s.terminal) {
                    cand += s.term;
                } else if (best[s.nt].has_value()) {
                    cand += best[s.nt]->str();
                } else {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            Word w(cand);
            if (better(w, best[p.head])) {
                best[p.head] = w;
                changed = true;
            }
        }
    }
    return best[g.start];
}

bool cfg_is_right_linear(const Cfg& g) {
    for (const auto& p : g.productions)
        for (std::size_t i = 0; i < p.body.size(); ++i)
            if (!p.body[i].terminal && i + 1 != p.body.size())
                return false;
    return true;
}

Nfa right_linear_to_nfa(const Cfg& g) {
    g.validate();
    if (!cfg_is_right_linear(g))
        throw PreconditionError("right_linear_to_nfa: grammar is not right-linear");

    Nfa n;
    n.alphabet = g.terminals;
    // state per nonterminal + accepting sink; word paths get fresh states
    State sink = static_cast<State>(g.nonterminals.size());
    State fresh = sink + 1;
    n.initial_states = {static_cast<State>(g.start)};
    n.final_states = {sink};
    for (const auto& p : g.productions) {
        bool has_nt = !p.body.empty() && !p.body.back().terminal;
        std::size_t word_len = p.body.size() - (has_nt ? 1 : 0);
        State target = has_nt ? static_cast<State>(p.body.back().nt) : sink;
        State prev = static_cast<State>(p.head);
        if (word_len == 0) {
            n.transitions.push_back({prev, std::nullopt, target});
            continue;
        }
        for (std::size_t i = 0; i + 1 < word_len; ++i) {
            n.transitions.push_back({prev, p.body[i].term, fresh});
            prev = fresh++;
        }
        n.transitions.push_back({prev, p.body[word_len - 1].term, target});
    }
    n.state_count = fresh;
    n.normalize_and_validate();
    return n;
}

// ---- canonical enumeration of right-linear grammars ----

namespace {

/// Canonical production order: (head, body length, body symbols) with a
/// terminal sorting before a nonterminal at the same position.
std::vector<std::uint32_t> production_key(const Production& p, const Alphabet& alphabet) {
    std::vector<std::uint32_t> key{p.head, static_cast<std::uint32_t>(p.body.size())};
    for (const auto& s : p.body) {
        if (s.terminal) {
            key.push_back(0);
            key.push_back(static_cast<std::uint32_t>(alphabet.index(s.term)));
        } else {
            key.push_back(1);
            key.push_back(s.nt);
        }
    }
    return key;
}

struct RlinEnumState {
    const Alphabet* alphabet;
    std::uint64_t emitted = 0;
    std::uint64_t cutoff = UINT64_MAX;
    const std::function<bool(const Cfg&)>* emit = nullptr;
    bool stopped = false;
    std::vector<Production> current;

    bool deliver() {
        ++emitted;
        if (emitted > cutoff) {
            stopped = true;
            return false;
        }
        if (!emit)
            return true;
        std::uint32_t nt_count = 0;
        for (const auto& p : current) {
            nt_count = std::max(nt_count, p.head + 1);
            for (const auto& s : p.body)
                if (!s.terminal)
                    nt_count = std::max(nt_count, s.nt + 1);
        }
        Cfg g;
        g.terminals = *alphabet;
        g.start = 0;
        g.nonterminals.resize(nt_count);
        for (std::uint32_t i = 0; i < nt_count; ++i)
            g.nonterminals[i] = "N" + std::to_string(i);
        g.productions = current;
        g.validate();
        if (!(*emit)(g)) {
            stopped = true;
            return false;
        }
        return true;
    }
};

/// Recursively extends the current strictly-increasing production list.
/// `seen` is the number of nonterminals introduced so far (first-appearance
/// numbering); a nonterminal index may be used iff it is < seen, or == seen
/// (introducing it).
void rlin_extend(RlinEnumState& st, std::size_t remaining,
                 const std::vector<std::uint32_t>* last_key, std::uint32_t seen) {
    if (st.stopped)
        return;
    if (remaining == 0) {
        if (!st.current.empty())
            st.deliver();
        return;
    }
    const std::size_t sigma = st.alphabet->size();

    auto try_production = [&](std::uint32_t head, const std::vector<GrammarSymbol>& body,
                              std::uint32_t seen_after) {
        Production p{head, body};
        auto key = production_key(p, *st.alphabet);
        if (last_key && !(*last_key < key))
            return;
        st.current.push_back(std::move(p));
        rlin_extend(st, remaining - (1 + body.size()), &key, seen_after);
        st.current.pop_back();
    };

    // next production: size 1 + body_len <= remaining; bodies are terminal
    // strings with an optional trailing nonterminal
    for (std::uint32_t head = 0; head <= seen && !st.stopped; ++head) {
        std::uint32_t seen_h = seen + (head == seen ? 1 : 0);
        for (std::size_t body_len = 0; body_len + 1 <= remaining && !st.stopped; ++body_len) {
            if (body_len == 0) {
                try_production(head, {}, seen_h);
                continue;
            }
            // terminal prefix of length body_len - 1, iterated in alphabet order
            std::vector<std::size_t> prefix(body_len - 1, 0);
            for (;;) {
                std::vector<GrammarSymbol> body;
                body.reserve(body_len);
                for (std::size_t v : prefix)
                    body.push_back(GrammarSymbol::t(st.alphabet->symbol(v)));
                // trailing position: terminals first, then nonterminals
                for (std::size_t v = 0; v < sigma && !st.stopped; ++v) {
                    body.push_back(GrammarSymbol::t(st.alphabet->symbol(v)));
                    try_production(head, body, seen_h);
                    body.pop_back();
                }
                for (std::uint32_t nt = 0; nt <= seen_h && !st.stopped; ++nt) {
                    body.push_back(GrammarSymbol::n(nt));
                    try_production(head, body, seen_h + (nt == seen_h ? 1 : 0));
                    body.pop_back();
                }
                if (st.stopped)
                    return;
                // advance the terminal prefix odometer (last digit fastest)
                std::size_t pos = prefix.size();
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (prefix[pos] + 1 < sigma) {
                        ++prefix[pos];
                        std::fill(prefix.begin() + pos + 1, prefix.end(), 0);
                        done = false;
                        break;
                    }
                    prefix[pos] = 0;
                }
                if (done)
                    break;
            }
        }
    }
}

} // namespace

void enumerate_right_linear(std::size_t n, const Alphabet& alphabet,
                            const std::function<bool(const Cfg&)>& emit) {
    if (n == 0)
        throw PreconditionError("enumerate_right_linear: n must be >= 1");
    RlinEnumState st;
    st.alphabet = &alphabet;
    st.emit = &emit;
    rlin_extend(st, n, nullptr, 0);
}

std::optional<std::uint64_t> right_linear_enumeration_count(std::size_t n,
                                                            const Alphabet& alphabet,
                                                            std::uint64_t cutoff) {
    if (n == 0)
        return 0;
    RlinEnumState st;
    st.alphabet = &alphabet;
    st.cutoff = cutoff;
    rlin_extend(st, n, nullptr, 0);
    if (st.stopped)
        return std::nullopt;
    return st.emitted;
}

// ---- text format ----

Cfg parse_cfg(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;

    Cfg g;
    std::optional<Alphabet> declared_alphabet;
    std::vector<std::string> nt_names;
    struct RawProd {
        std::string head;
        std::vector<std::vector<std::string>> alternatives;
        std::size_t line;
    };
    std::vector<RawProd> raw;

    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string tok;
        while (ls >> tok)
            toks.push_back(tok);
        if (toks.empty())
            continue;
        if (toks[0] == "alphabet:") {
            if (toks.size() != 2)
                throw ParseError(lineno, "expected 'alphabet: <symbols>'");
            try {
                declared_alphabet = Alphabet(toks[1]);
            } catch (const std::exception& e) {
                throw ParseError(lineno, e.what());
            }
            continue;
        }
        if (toks.size() < 2 || toks[1] != "->")
            throw ParseError(lineno, "expected '<Head> -> <alternatives>'");
        if (!valid_nt_name(toks[0]))
            throw ParseError(lineno, "invalid nonterminal name '" + toks[0] + "'");
        RawProd rp;
        rp.head = toks[0];
        rp.line = lineno;
        rp.alternatives.emplace_back();
        for (std::size_t i = 2; i < toks.size(); ++i) {
            if (toks[i] == "|")
                rp.alternatives.emplace_back();
            else
                rp.alternatives.back().push_back(toks[i]);
        }
        // a bare `H ->` line declares a productionless nonterminal
        if (toks.size() == 2)
            rp.alternatives.clear();
        raw.push_back(std::move(rp));
    }
    if (raw.empty())
        throw ParseError(lineno == 0 ? 1 : lineno, "no productions found");

    auto intern_nt = [&](const std::string& name) {
        for (std::size_t i = 0; i < nt_names.size(); ++i)
            if (nt_names[i] == name)
                return static_cast<std::uint32_t>(i);
        nt_names.push_back(name);
        return static_cast<std::uint32_t>(nt_names.size() - 1);
    };

    // pass 1: heads in order, then body nonterminals
    for (const auto& rp : raw)
        intern_nt(rp.head);
    std::string terminal_chars;
    for (const auto& rp : raw)
        for (const auto& alt : rp.alternatives)
            for (const auto& t : alt) {
                if (t == "_")
                    continue;
                if (t.size() == 1 && std::islower(static_cast<unsigned char>(t[0]))) {
                    if (terminal_chars.find(t[0]) == std::string::npos)
                        terminal_chars += t[0];
                } else if (valid_nt_name(t)) {
                    intern_nt(t);
                } else {
                    throw ParseError(rp.line, "token '" + t +
                                                  "' is neither a terminal (single lowercase "
                                                  "letter), a nonterminal, nor '_'");
                }
            }

    std::sort(terminal_chars.begin(), terminal_chars.end());
    if (declared_alphabet.has_value()) {
        for (char c : terminal_chars)
            if (!declared_alphabet->contains(c))
                throw ParseError(1, std::string("terminal '") + c +
                                        "' not in the declared alphabet");
        g.terminals = *declared_alphabet;
    } else {
        if (terminal_chars.empty())
            throw ParseError(1, "no terminals appear; declare the alphabet with 'alphabet: ...'");
        g.terminals = Alphabet(terminal_chars);
    }

    g.nonterminals = nt_names;
    g.start = 0;
    for (const auto& rp : raw) {
        std::uint32_t head = *Cfg{g}.nt_index(rp.head); // names already interned
        for (const auto& alt : rp.alternatives) {
            Production p{head, {}};
            for (const auto& t : alt) {
                if (t == "_") {
                    if (alt.size() != 1)
                        throw ParseError(rp.line, "'_' must be the only token of its alternative");
                    continue;
                }
                if (t.size() == 1 && std::islower(static_cast<unsigned char>(t[0])))
                    p.body.push_back(GrammarSymbol::t(t[0]));
                else
                    p.body.push_back(GrammarSymbol::n(*Cfg{g}.nt_index(t)));
            }
            g.productions.push_back(std::move(p));
        }
    }
    try {
        g.validate();
    } catch (const std::exception& e) {
        throw ParseError(1, e.what());
    }
    return g;
}

std::string cfg_to_text(const Cfg& g) {
    std::ostringstream os;
    os << "#cfg\n";
    os << "alphabet: " << g.terminals.symbols() << "\n";

    // one line per nonterminal, start first, then first-appearance order of
    // the remaining heads; alternatives keep production order
    std::vector<std::uint32_t> head_order;
    auto seen = [&](std::uint32_t h) {
        return std::find(head_order.begin(), head_order.end(), h) != head_order.end();
    };
    head_order.push_back(g.start);
    for (const auto& p : g.productions)
        if (!seen(p.head))
            head_order.push_back(p.head);

    for (std::uint32_t h : head_order) {
        os << g.nt_name(h) << " ->";
        bool first = true;
        bool any = false;
        for (const auto& p : g.productions) {
            if (p.head != h)
                continue;
            any = true;
            if (!first)
                os << " |";
            first = false;
            if (p.body.empty()) {
                os << " _";
                continue;
            }
            for (const auto& s : p.body)
                os << ' ' << (s.terminal ? std::string(1, s.term) : g.nt_name(s.nt));
        }
        (void)any;
        os << "\n";
    }
    return os.str();
}

} // namespace descomp
