#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

namespace supercurve::detail {

struct Token {
    enum Kind { Plus, Minus, Rat, Name, Caret, Int } kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '+') {
            out.push_back({Token::Plus, "+", i++});
        } else if (c == '-') {
            out.push_back({Token::Minus, "-", i++});
        } else if (c == '^') {
            out.push_back({Token::Caret, "^", i++});
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                ++i;
            if (i < text.size() && text[i] == '/') {
                ++i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
                    ++i;
                out.push_back({Token::Rat, text.substr(start, i - start), start});
            } else {
                out.push_back({Token::Int, text.substr(start, i - start), start});
            }
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            out.push_back({Token::Name, text.substr(start, i - start), start});
        } else {
            throw std::runtime_error("parse error at offset " + std::to_string(i) +
                                     ": unexpected character '" + std::string(1, c) + "'");
        }
    }
    return out;
}

} // namespace supercurve::detail
