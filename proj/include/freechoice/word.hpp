#pragma once

// Reduced words in a free group over an arbitrary ordered alphabet.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace freechoice {

enum class Sign : std::int8_t { Negative = -1, Positive = 1 };

constexpr Sign flip(Sign s) noexcept { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }
constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }

/// Index of a block y of the family. Ids are assigned in canonical block
/// order, so comparing ids compares blocks canonically.
struct BlockId {
    std::uint32_t value = 0;
    auto operator<=>(const BlockId &) const = default;
};

/// A generator of F(X): an element tagged with the block it is drawn from.
/// The same symbol in two different blocks gives two distinct generators.
struct TaggedLetter {
    std::string element;
    BlockId block;

    // Canonical letter order: block first, then element bytewise.
    auto operator<=>(const TaggedLetter &other) const
    {
        if (auto c = block <=> other.block; c != 0)
            return c;
        return element.compare(other.element) <=> 0;
    }
    bool operator==(const TaggedLetter &) const = default;
};

/// Letter of a B-word: position of an element in a basis.
struct BasisLetter {
    std::uint32_t index = 0;
    auto operator<=>(const BasisLetter &) const = default;
};

template <typename A>
struct SignedLetter {
    A letter;
    Sign sign = Sign::Positive;

    SignedLetter inverse() const { return {letter, flip(sign)}; }
    bool is_inverse_of(const SignedLetter &other) const { return sign != other.sign && letter == other.letter; }

    auto operator<=>(const SignedLetter &) const = default;
};

template <typename A>
SignedLetter<A> pos(A letter) { return {std::move(letter), Sign::Positive}; }
template <typename A>
SignedLetter<A> neg(A letter) { return {std::move(letter), Sign::Negative}; }

/// An element of the free group: an immutable reduced word.
/// Every constructor reduces, so a Word is never in unreduced form.
template <typename A>
class Word {
public:
    using letter_type = SignedLetter<A>;

    Word() = default;

    explicit Word(std::vector<letter_type> raw) : letters_(std::move(raw)) { reduce_in_place(letters_); }

    Word(std::initializer_list<letter_type> raw) : Word(std::vector<letter_type>(raw)) {}

    static Word identity() { return Word(); }

    bool is_identity() const noexcept { return letters_.empty(); }
    std::size_t size() const noexcept { return letters_.size(); }
    const letter_type &operator[](std::size_t i) const { return letters_[i]; }
    std::span<const letter_type> letters() const noexcept { return letters_; }
    auto begin() const noexcept { return letters_.begin(); }
    auto end() const noexcept { return letters_.end(); }

    /// First `count` letters (a prefix of a reduced word is reduced).
    Word prefix(std::size_t count) const
    {
        Word w;
        w.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(std::min(count, size())));
        return w;
    }

    auto operator<=>(const Word &) const = default;
    bool operator==(const Word &) const = default;

    // Stack-based free reduction; the stack top is the last kept letter.
    static void reduce_in_place(std::vector<letter_type> &letters)
    {
        std::size_t top = 0;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (top > 0 && letters[top - 1].is_inverse_of(letters[i]))
                --top;
            else {
                if (top != i)
                    letters[top] = std::move(letters[i]);
                ++top;
            }
        }
        letters.resize(top);
    }

private:
    std::vector<letter_type> letters_;
};

using XWord = Word<TaggedLetter>;
using BWord = Word<BasisLetter>;

template <typename A>
Word<A> reduce(std::span<const SignedLetter<A>> raw)
{
    return Word<A>(std::vector<SignedLetter<A>>(raw.begin(), raw.end()));
}

template <typename A>
Word<A> reduce(const std::vector<SignedLetter<A>> &raw)
{
    return Word<A>(raw);
}

template <typename A>
Word<A> inverse(const Word<A> &u)
{
    std::vector<SignedLetter<A>> out;
    out.reserve(u.size());
    for (auto it = u.letters().rbegin(); it != u.letters().rend(); ++it)
        out.push_back(it->inverse());
    // Reversing and flipping a reduced word leaves it reduced.
    return Word<A>(std::move(out));
}

/// Number of letter pairs that cancel when u and v are concatenated.
template <typename A>
std::size_t cancellation_count(const Word<A> &u, const Word<A> &v)
{
    std::size_t t = 0;
    while (t < u.size() && t < v.size() && u[u.size() - 1 - t].is_inverse_of(v[t]))
        ++t;
    return t;
}

template <typename A>
Word<A> concat(const Word<A> &u, const Word<A> &v)
{
    std::size_t t = cancellation_count(u, v);
    std::vector<SignedLetter<A>> out;
    out.reserve(u.size() + v.size() - 2 * t);
    out.insert(out.end(), u.begin(), u.end() - static_cast<std::ptrdiff_t>(t));
    out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(t), v.end());
    return Word<A>(std::move(out));
}

template <typename A>
Word<A> operator*(const Word<A> &u, const Word<A> &v)
{
    return concat(u, v);
}

template <typename A>
Word<A> letter_word(A letter, Sign sign = Sign::Positive)
{
    return Word<A>(std::vector<SignedLetter<A>>{SignedLetter<A>{std::move(letter), sign}});
}

/// Signed count of letters tagged with block y.
int sigma(BlockId y, const XWord &w);

/// Position of the first letter tagged y, or size() if there is none.
std::size_t first_letter_in_block(BlockId y, const XWord &w);

std::string to_string(BlockId id);
std::string to_string(const TaggedLetter &letter);
std::string to_string(BasisLetter letter);

/// Renders a word as space-separated letters, inverses suffixed with "^-1";
/// the identity renders as "1".
template <typename A, typename Namer>
std::string format_word(const Word<A> &w, Namer &&name)
{
    if (w.is_identity())
        return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            out += ' ';
        out += name(w[i].letter);
        if (w[i].sign == Sign::Negative)
            out += "^-1";
    }
    return out;
}

template <typename A>
std::string format_word(const Word<A> &w)
{
    return format_word(w, [](const A &a) { return to_string(a); });
}

} // namespace freechoice
