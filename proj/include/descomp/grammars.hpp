#ifndef DESCOMP_GRAMMARS_HPP
#define DESCOMP_GRAMMARS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "descomp/automata.hpp"
#include "descomp/kernel.hpp"

namespace descomp {

/// A grammar symbol: either a terminal character or a nonterminal index
/// into Cfg::nonterminals.
struct GrammarSymbol {
    bool terminal;
    char term;        // valid when terminal
    std::uint32_t nt; // valid when !terminal

    static GrammarSymbol t(char c) { return {true, c, 0}; }
    static GrammarSymbol n(std::uint32_t i) { return {false, '\0', i}; }

    friend bool operator==(const GrammarSymbol& a, const GrammarSymbol& b) {
        if (a.terminal != b.terminal)
            return false;
        return a.terminal ? a.term == b.term : a.nt == b.nt;
    }
};

struct Production {
    std::uint32_t head;
    std::vector<GrammarSymbol> body;

    friend bool operator==(const Production& a, const Production& b) {
        return a.head == b.head && a.body == b.body;
    }
};

/// Context-free grammar. Nonterminal names are capitalized identifiers;
/// terminal symbols are single characters from `terminals`.
struct Cfg {
    std::vector<std::string> nonterminals;
    Alphabet terminals;
    std::vector<Production> productions;
    std::uint32_t start = 0;

    void validate() const;

    const std::string& nt_name(std::uint32_t i) const { return nonterminals.at(i); }
    std::optional<std::uint32_t> nt_index(const std::string& name) const;

    bool operator==(const Cfg& other) const {
        return nonterminals == other.nonterminals && terminals == other.terminals &&
               productions == other.productions && start == other.start;
    }
};

/// Grammar size: sum over productions of (1 + body length).
std::size_t cfg_size(const Cfg& g);

bool cfg_empty(const Cfg& g);
/// True iff L(g) is finite: trim, remove λ- and unit-productions (language
/// preserved up to λ), then look for a cycle in the nonterminal
/// dependency graph.
bool cfg_finite(const Cfg& g);

/// Chomsky-normal-form view of a grammar, reusable across many membership
/// queries. Transformation order: terminal lifting, binarization,
/// λ-elimination, unit-elimination; λ ∈ L is tracked via a side flag.
class CnfForm {
public:
    explicit CnfForm(const Cfg& g);

    bool accepts_lambda() const { return accepts_lambda_; }
    /// CYK membership for non-empty words; `member` handles λ via the flag.
    bool member(const Word& w) const;

    const Alphabet& terminals() const { return terminals_; }

private:
    Alphabet terminals_;
    bool accepts_lambda_ = false;
    std::uint32_t nt_count_ = 0;
    std::uint32_t start_ = 0;
    std::vector<std::pair<std::uint32_t, char>> terminal_rules_; // A -> a
    std::vector<std::array<std::uint32_t, 3>> binary_rules_;     // A -> B C
};

bool cfg_member(const Cfg& g, const Word& w);

/// Word-wise regular substitution on terminals: every terminal a is replaced
/// by a fresh nonterminal generating L(σ(a)) through right-linear
/// productions. All σ images must share one output alphabet.
Cfg regular_substitution_cfg(const Cfg& g, const std::function<const Nfa&(char)>& sigma);

/// Up(L(g)) — substitution by a ↦ A*aA* followed by right concatenation
/// with A*, which makes the image correct when λ ∈ L(g).
Cfg cfg_up(const Cfg& g);
/// Down(L(g)) — substitution by a ↦ {λ, a} (exact for every L).
Cfg cfg_down(const Cfg& g);

/// L(g) ∩ L(d) by the triple construction over the CNF of g; the result is
/// trimmed. Alphabets must match.
Cfg bar_hillel(const Cfg& g, const Dfa& d);

Cfg cfg_concat_regular(const Cfg& g, const Nfa& r, ConcatSide side);
Cfg cfg_union(const Cfg& a, const Cfg& b);
/// Terminal rewrite h applied to every production body.
Cfg cfg_morphism(const Cfg& g, const MorphismMap& h);

/// Length-lexicographically least member of L(g), absent iff L(g) is empty.
std::optional<Word> shortest_generated(const Cfg& g);

/// True iff every production is right-linear (terminals followed by at most
/// one trailing nonterminal).
bool cfg_is_right_linear(const Cfg& g);
/// Language-preserving conversion of a right-linear grammar to an NFA.
Nfa right_linear_to_nfa(const Cfg& g);

// ---- canonical enumeration of right-linear grammars ----

/// Streams the canonical right-linear grammars with cfg_size == n over
/// `alphabet`: production lists strictly increasing under (head, body
/// length, body symbols), nonterminal indices normalized by first
/// appearance (start = 0 first). The callback may return false to stop.
void enumerate_right_linear(std::size_t n, const Alphabet& alphabet,
                            const std::function<bool(const Cfg&)>& emit);

/// Upper-bound count with early cutoff: counts the stream but stops at
/// `cutoff` (returns nullopt when exceeded).
std::optional<std::uint64_t> right_linear_enumeration_count(std::size_t n,
                                                            const Alphabet& alphabet,
                                                            std::uint64_t cutoff);

// ---- text format ----

/// `S -> a S b | a b`, one nonterminal's alternatives per line, `_` for λ,
/// the first line's head is the start symbol. `S ->` (no alternatives)
/// declares a productionless nonterminal.
Cfg parse_cfg(const std::string& text);
std::string cfg_to_text(const Cfg& g);

} // namespace descomp

#endif
