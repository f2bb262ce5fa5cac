#ifndef DESCOMP_KERNEL_HPP
#define DESCOMP_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "descomp/errors.hpp"

namespace descomp {

/// A finite, ordered set of distinct printable symbols. The given order is
/// total and fixed; it drives every lexicographic comparison in the library
/// (it need not coincide with byte order).
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::string_view symbols);

    std::size_t size() const { return symbols_.size(); }
    const std::string& symbols() const { return symbols_; }
    char symbol(std::size_t index) const { return symbols_.at(index); }

    bool contains(char c) const;
    /// Position of `c` in the alphabet order; throws AlphabetMismatch if absent.
    std::size_t index(char c) const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Alphabet& other) const { return symbols_ != other.symbols_; }

private:
    std::string symbols_;
};

/// A finite word; the empty word is Word().
class Word {
public:
    Word() = default;
    explicit Word(std::string_view symbols) : symbols_(symbols) {}

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    char at(std::size_t i) const { return symbols_.at(i); }
    const std::string& str() const { return symbols_; }

    Word append(char c) const { return Word(symbols_ + c); }

    bool operator==(const Word& other) const { return symbols_ == other.symbols_; }
    bool operator!=(const Word& other) const { return symbols_ != other.symbols_; }

private:
    std::string symbols_;
};

/// Throws AlphabetMismatch unless every symbol of `w` belongs to `alphabet`.
void require_over(const Word& w, const Alphabet& alphabet, const std::string& context);

/// Length-lexicographic order: shorter first, ties broken symbol-wise by
/// alphabet order. Unlike pure lexicographic order this is a well-order on
/// A*, so every non-empty language has a least element.
bool length_lex_less(const Word& a, const Word& b, const Alphabet& alphabet);

/// Scattered-subword order: true iff v embeds into w preserving symbol order
/// (not necessarily contiguously). Greedy left-to-right matching.
bool subword_leq(const Word& v, const Word& w);

/// All words of length <= max_len in length-lexicographic order.
std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len);

/// Number of words of length <= max_len, i.e. sum of |A|^i; throws on overflow.
std::uint64_t count_words_up_to(const Alphabet& alphabet, std::size_t max_len);

enum class Truth { True, False, Unknown };

/// Three-valued decision result. True and False are proofs the caller may
/// rely on unconditionally; Unknown records the step budget that was spent.
class Verdict {
public:
    static Verdict yes() { return Verdict(Truth::True, 0); }
    static Verdict no() { return Verdict(Truth::False, 0); }
    static Verdict unknown(std::uint64_t budget_spent) { return Verdict(Truth::Unknown, budget_spent); }
    static Verdict of(bool b) { return b ? yes() : no(); }

    Truth value() const { return value_; }
    bool is_true() const { return value_ == Truth::True; }
    bool is_false() const { return value_ == Truth::False; }
    bool is_unknown() const { return value_ == Truth::Unknown; }
    std::uint64_t budget_spent() const { return budget_spent_; }

    std::string to_string() const;

    bool operator==(const Verdict& other) const {
        return value_ == other.value_ && budget_spent_ == other.budget_spent_;
    }

private:
    Verdict(Truth v, std::uint64_t spent) : value_(v), budget_spent_(spent) {}
    Truth value_;
    std::uint64_t budget_spent_;
};

/// A step-resumable boolean computation. step() performs one unit of work
/// and returns the final answer once the computation has finished.
class Task {
public:
    virtual ~Task() = default;
    virtual std::optional<bool> step() = 0;
};

/// Produces the task at a given index, or nullptr when the (finite) family
/// has no task there. Indices are probed in increasing order, so a family of
/// size m returns nullptr at index m. Families may be infinite.
using TaskFactory = std::function<std::unique_ptr<Task>(std::size_t index)>;

/// Fair interleaved execution of a lazily supplied task family.
///
/// Schedule: rounds r = 0, 1, 2, ...; round r activates task r and runs each
/// active unfinished task for a quantum of 2^r steps. Every step() call
/// counts once against `budget`.
///
/// Guarantee: a task at index i that terminates with true after s steps is
/// found whenever budget >= (r*+2) * 2^(r*+1), where
/// r* = max(i, ceil(log2(max(s,1))) + 1); with unlimited budget it is always
/// found. Returns False only when the family is finite and every task
/// completed with false. Deterministic for fixed inputs and budget.
Verdict dovetail(const TaskFactory& tasks, std::uint64_t budget);

/// Wraps a plain boolean thunk as a Task costing `steps` step calls.
std::unique_ptr<Task> delayed_task(std::uint64_t steps, std::function<bool()> result);

} // namespace descomp

#endif
