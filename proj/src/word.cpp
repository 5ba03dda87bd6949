#include "freechoice/word.hpp"

namespace freechoice {

int sigma(BlockId y, const XWord &w)
{
    int total = 0;
    for (const auto &l : w)
        if (l.letter.block == y)
            total += to_int(l.sign);
    return total;
}

std::size_t first_letter_in_block(BlockId y, const XWord &w)
{
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i].letter.block == y)
            return i;
    return w.size();
}

std::string to_string(BlockId id) { return "y" + std::to_string(id.value); }

std::string to_string(const TaggedLetter &letter) { return letter.element + "@" + to_string(letter.block); }

std::string to_string(BasisLetter letter) { return "b" + std::to_string(letter.index); }

} // namespace freechoice
