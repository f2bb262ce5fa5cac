#ifndef DESCOMP_AUTOMATA_HPP
#define DESCOMP_AUTOMATA_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "descomp/kernel.hpp"

namespace descomp {

using State = std::uint32_t;

/// One NFA transition; an absent label is an epsilon move.
struct Transition {
    State from;
    std::optional<char> label; // nullopt = epsilon
    State to;

    friend bool operator==(const Transition& a, const Transition& b) {
        return a.from == b.from && a.label == b.label && a.to == b.to;
    }
    friend bool operator<(const Transition& a, const Transition& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.label != b.label) return a.label < b.label; // epsilon sorts first
        return a.to < b.to;
    }
};

/// Nondeterministic finite automaton. States are 0..state_count-1; the
/// transition list is kept sorted and duplicate-free.
struct Nfa {
    std::size_t state_count = 0;
    Alphabet alphabet;
    std::vector<Transition> transitions;
    std::vector<State> initial_states; // sorted, non-empty
    std::vector<State> final_states;   // sorted

    /// Sorts/dedupes the state sets and transition list, then checks the
    /// type invariants; throws std::invalid_argument on violation.
    void normalize_and_validate();

    bool is_final(State q) const;
    bool is_initial(State q) const;

    bool operator==(const Nfa& other) const;
};

/// Complete deterministic finite automaton: `transition` is total,
/// row-major over (state, alphabet index).
struct Dfa {
    std::size_t state_count = 0;
    Alphabet alphabet;
    std::vector<State> transition; // state_count * |A| entries
    State initial = 0;
    std::vector<State> final_states; // sorted

    State next(State q, char symbol) const;
    State next_by_index(State q, std::size_t symbol_index) const {
        return transition[q * alphabet.size() + symbol_index];
    }
    bool is_final(State q) const;

    void normalize_and_validate();

    bool operator==(const Dfa& other) const;
};

// ---- decision procedures ----

bool nfa_member(const Nfa& n, const Word& w);
bool nfa_empty(const Nfa& n);
/// True iff L(n) is finite. Trim to states that are both reachable and
/// co-reachable, then look for a cycle that consumes at least one symbol
/// (epsilon-only cycles do not pump word length).
bool nfa_finite(const Nfa& n);

bool dfa_member(const Dfa& d, const Word& w);

// ---- canonical forms ----

/// Subset construction with epsilon closure; the result is complete (the
/// empty subset acts as the dead state when it is reachable).
Dfa determinize(const Nfa& n);

/// The unique minimal complete DFA for L(d), states renumbered by
/// breadth-first discovery order from the initial state with edges explored
/// in alphabet order. Equivalent inputs produce identical encodings.
Dfa minimize(const Dfa& d);

/// Canonical text key for a DFA; equal keys iff equal encodings.
std::string dfa_key(const Dfa& d);

bool dfa_equiv(const Dfa& a, const Dfa& b);
bool nfa_equiv(const Nfa& a, const Nfa& b);

/// Canonical minimal DFA of L(n): minimize(determinize(n)).
Dfa canonical_dfa(const Nfa& n);

// ---- word extraction ----

/// Length-lexicographically least member of L(n), absent iff L(n) is empty.
std::optional<Word> shortest_accepted(const Nfa& n);

/// Maximum word length of a finite, non-empty language; rejects infinite or
/// empty inputs with PreconditionError.
std::size_t longest_accepted_of_finite(const Nfa& n);

// ---- closure constructions ----

/// L = L(n) ∩ L(d), pair construction; epsilon moves advance only the NFA
/// component. Alphabets must match.
Nfa product_intersect(const Nfa& n, const Dfa& d);

enum class ConcatSide { Left, Right };

/// Left: L(r)·L(n); Right: L(n)·L(r). Disjoint union glued with epsilon
/// transitions from the first part's final states to the second's initials.
Nfa concat_regular(const Nfa& n, const Nfa& r, ConcatSide side);

Nfa nfa_union(const Nfa& a, const Nfa& b);

/// Maps each alphabet symbol to its image word (empty images permitted) over
/// an explicit output alphabet.
struct MorphismMap {
    Alphabet output;
    std::map<char, Word> images;

    const Word& image(char c) const;
};

/// h(L(n)): each a-transition becomes a path spelling h(a) (an epsilon move
/// when h(a) is empty). `h` must be defined on n's whole alphabet.
Nfa morphism(const Nfa& n, const MorphismMap& h);

/// h^{-1}(L(n)) where h maps the *result* alphabet into words over n's
/// alphabet: the result has a c-transition q -> q' whenever q' is reachable
/// from q in n reading h(c) (epsilon moves free).
Nfa inverse_morphism(const Nfa& n, const MorphismMap& h);

/// Word-wise regular substitution: L = σ(L(n)) = ∪_{w ∈ L(n)} σ(w), where
/// σ(a1...ak) = σ(a1)···σ(ak) and σ(λ) = {λ}. Every substituted NFA must be
/// over one common output alphabet; each a-transition is replaced by a fresh
/// copy of σ(a) glued in with epsilon transitions.
Nfa regular_substitution(const Nfa& n, const std::function<const Nfa&(char)>& sigma);

/// Up(L) = { x | ∃ y ∈ L : y ≤ x } (scattered superwords). Direct
/// construction: a self-loop on every alphabet symbol at every state.
/// Total: up_closure of a language containing λ is A*.
Nfa up_closure(const Nfa& n);

/// Down(L) = { x | ∃ y ∈ L : x ≤ y } (scattered subwords). Direct
/// construction: a parallel epsilon transition for every symbol transition.
Nfa down_closure(const Nfa& n);

/// NFA for A*aA* over `alphabet` (the up-substitution image of a).
Nfa up_image_nfa(const Alphabet& alphabet, char a);
/// NFA for {λ, a} over `alphabet` (the down-substitution image of a).
Nfa down_image_nfa(const Alphabet& alphabet, char a);

/// 1-state acceptor of A* over `alphabet`.
Nfa all_words_nfa(const Alphabet& alphabet);
/// Complete DFA accepting A+ (all non-empty words).
Dfa nonempty_words_dfa(const Alphabet& alphabet);
/// Complete DFA accepting the words of length >= k.
Dfa min_length_dfa(const Alphabet& alphabet, std::size_t k);
/// 1-state acceptor of a* for a single symbol a of `alphabet`.
Nfa symbol_star_nfa(const Alphabet& alphabet, char a);

// ---- canonical enumeration ----

/// Number of epsilon-free NFAs with exactly n states over `alphabet`
/// (state 0 the unique initial state): 2^(n*n*|A| + n).
/// Returns nullopt when the count exceeds 2^63-1.
std::optional<std::uint64_t> nfa_enumeration_count(std::size_t n, const Alphabet& alphabet);
/// Number of complete DFAs with exactly n states (initial 0): n^(n|A|) * 2^n.
std::optional<std::uint64_t> dfa_enumeration_count(std::size_t n, const Alphabet& alphabet);

/// Streams all epsilon-free NFAs with exactly n states over `alphabet` in a
/// fixed canonical order (state 0 the unique initial state). With
/// `prune_isomorphic`, emits one representative per isomorphism class
/// (relabelings fixing state 0). The callback may return false to stop.
void enumerate_nfas(std::size_t n, const Alphabet& alphabet, bool prune_isomorphic,
                    const std::function<bool(const Nfa&)>& emit);

/// Streams all complete DFAs with exactly n states, initial state 0, in
/// transition-table-major canonical order (row-major targets, then final
/// sets). That order makes the first equivalent candidate of minimal size
/// coincide with the BFS-canonical minimized DFA.
void enumerate_dfas(std::size_t n, const Alphabet& alphabet, bool prune_isomorphic,
                    const std::function<bool(const Dfa&)>& emit);

// ---- text format ----

std::string nfa_to_text(const Nfa& n);
std::string dfa_to_text(const Dfa& d);
/// Parses the line-oriented automaton format; `first_line` offsets reported
/// line numbers (for embedded texts). Rejects out-of-range indices with a
/// line-numbered ParseError.
Nfa parse_nfa(const std::string& text);
Dfa parse_dfa(const std::string& text);

Nfa dfa_to_nfa(const Dfa& d);

} // namespace descomp

#endif
