#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "dimspec/errors.hpp"

namespace dimspec {

// A finite sequence of alphabet indices. Positions are 1-indexed in the
// accessors to match the usual x_1 x_2 ... convention of symbolic dynamics;
// storage is a plain 0-based vector.
struct Word {
    std::vector<int> letters;

    Word() = default;
    explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}
    Word(std::initializer_list<int> ls) : letters(ls) {}

    std::size_t size() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    // 1-indexed access.
    int at(std::size_t pos) const {
        if (pos < 1 || pos > letters.size()) throw InputError("word position out of range");
        return letters[pos - 1];
    }

    Word prefix(std::size_t n) const {
        if (n > letters.size()) throw InputError("prefix longer than word");
        return Word(std::vector<int>(letters.begin(), letters.begin() + static_cast<long>(n)));
    }

    friend Word operator+(const Word& a, const Word& b) {
        Word r = a;
        r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
        return r;
    }

    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

    // Compact rendering: plain digit string when all letters are single
    // digits, dot-separated otherwise ("0101" vs "12.3.1").
    std::string str() const {
        bool digits = true;
        for (int l : letters)
            if (l < 0 || l > 9) digits = false;
        std::string out;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            if (!digits && i > 0) out += '.';
            out += std::to_string(letters[i]);
        }
        return out;
    }

    // Inverse of str(): accepts both renderings.
    static Word parse(const std::string& s) {
        Word w;
        if (s.empty()) return w;
        if (s.find('.') != std::string::npos) {
            std::size_t pos = 0;
            while (pos < s.size()) {
                std::size_t next = s.find('.', pos);
                if (next == std::string::npos) next = s.size();
                const std::string tok = s.substr(pos, next - pos);
                if (tok.empty()) throw InputError("empty letter token in word '" + s + "'");
                w.letters.push_back(std::stoi(tok));
                pos = next + 1;
            }
        } else {
            for (char c : s) {
                if (c < '0' || c > '9') throw InputError("bad letter character in word '" + s + "'");
                w.letters.push_back(c - '0');
            }
        }
        return w;
    }
};

}  // namespace dimspec
