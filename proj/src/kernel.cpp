#include "descomp/kernel.hpp"

#include <algorithm>
#include <deque>

namespace descomp {

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
    if (symbols_.empty())
        throw std::invalid_argument("alphabet must be non-empty");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (c <= ' ' || c >= 127)
            throw std::invalid_argument("alphabet symbols must be printable non-space characters");
        for (std::size_t j = i + 1; j < symbols_.size(); ++j)
            if (symbols_[i] == symbols_[j])
                throw std::invalid_argument(std::string("duplicate alphabet symbol '") + symbols_[i] + "'");
    }
}

bool Alphabet::contains(char c) const {
    return symbols_.find(c) != std::string::npos;
}

std::size_t Alphabet::index(char c) const {
    auto pos = symbols_.find(c);
    if (pos == std::string::npos)
        throw AlphabetMismatch(std::string("symbol '") + c + "' not in alphabet '" + symbols_ + "'");
    return pos;
}

void require_over(const Word& w, const Alphabet& alphabet, const std::string& context) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!alphabet.contains(w.at(i)))
            throw AlphabetMismatch(context + ": symbol '" + std::string(1, w.at(i)) +
                                   "' not in alphabet '" + alphabet.symbols() + "'");
}

bool length_lex_less(const Word& a, const Word& b, const Alphabet& alphabet) {
    if (a.size() != b.size())
        return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::size_t ia = alphabet.index(a.at(i));
        std::size_t ib = alphabet.index(b.at(i));
        if (ia != ib)
            return ia < ib;
    }
    return false;
}

bool subword_leq(const Word& v, const Word& w) {
    std::size_t i = 0;
    for (std::size_t j = 0; i < v.size() && j < w.size(); ++j)
        if (v.at(i) == w.at(j))
            ++i;
    return i == v.size();
}

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_len) {
    std::vector<Word> out;
    out.emplace_back();
    std::size_t level_begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t level_end = out.size();
        for (std::size_t i = level_begin; i < level_end; ++i)
            for (char c : alphabet.symbols())
                out.push_back(out[i].append(c));
        level_begin = level_end;
    }
    return out;
}

std::uint64_t count_words_up_to(const Alphabet& alphabet, std::size_t max_len) {
    std::uint64_t total = 0, level = 1;
    for (std::size_t len = 0; len <= max_len; ++len) {
        if (total > UINT64_MAX - level)
            throw std::overflow_error("word count overflows");
        total += level;
        if (len < max_len) {
            if (level > UINT64_MAX / alphabet.size())
                throw std::overflow_error("word count overflows");
            level *= alphabet.size();
        }
    }
    return total;
}

std::string Verdict::to_string() const {
    switch (value_) {
    case Truth::True: return "True";
    case Truth::False: return "False";
    default: return "Unknown(" + std::to_string(budget_spent_) + ")";
    }
}

Verdict dovetail(const TaskFactory& tasks, std::uint64_t budget) {
    struct Slot {
        std::unique_ptr<Task> task;
        bool done = false;
    };
    std::deque<Slot> slots;
    bool family_exhausted = false;
    std::size_t next_index = 0;
    std::uint64_t spent = 0;

    for (std::uint64_t round = 0;; ++round) {
        if (!family_exhausted) {
            auto t = tasks(next_index);
            if (t) {
                slots.push_back(Slot{std::move(t), false});
                ++next_index;
            } else {
                family_exhausted = true;
            }
        }
        // quantum 2^round, saturated
        std::uint64_t quantum = round >= 63 ? UINT64_MAX : (std::uint64_t{1} << round);
        bool any_pending = false;
        for (auto& slot : slots) {
            if (slot.done)
                continue;
            for (std::uint64_t q = 0; q < quantum; ++q) {
                if (spent >= budget)
                    return Verdict::unknown(spent);
                ++spent;
                auto r = slot.task->step();
                if (r.has_value()) {
                    if (*r)
                        return Verdict::yes();
                    slot.done = true;
                    break;
                }
            }
            if (!slot.done)
                any_pending = true;
        }
        if (family_exhausted && !any_pending)
            return Verdict::no();
        if (spent >= budget)
            return Verdict::unknown(spent);
    }
}

std::unique_ptr<Task> delayed_task(std::uint64_t steps, std::function<bool()> result) {
    class DelayedTask : public Task {
    public:
        DelayedTask(std::uint64_t steps, std::function<bool()> result)
            : remaining_(steps), result_(std::move(result)) {}
        std::optional<bool> step() override {
            if (remaining_ > 1) {
                --remaining_;
                return std::nullopt;
            }
            remaining_ = 0;
            return result_();
        }

    private:
        std::uint64_t remaining_;
        std::function<bool()> result_;
    };
    return std::make_unique<DelayedTask>(steps == 0 ? 1 : steps, std::move(result));
}

} // namespace descomp
