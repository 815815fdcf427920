/*
 * braid_expr.hpp
 *
 * Surface syntax for braid words:
 *
 *   expr := term+
 *   term := atom | '(' expr ')' '^' INT
 *   atom := 's' INT | 's' INT "'"
 *
 * "s2'" is the inverse of s2, and a negative exponent repeats the reversed
 * word of inverses.  Syntax errors carry the 1-based column of the
 * offending character.
 */
#ifndef KHMORSE_BRAID_EXPR_HPP
#define KHMORSE_BRAID_EXPR_HPP

#include <cctype>
#include <string>
#include <vector>

#include "cube.hpp"
#include "errors.hpp"

namespace khmorse
{

class BraidSyntaxError : public ParseError
{
public:
    BraidSyntaxError(const std::string& msg, std::size_t column)
        : ParseError("column " + std::to_string(column) + ": " + msg, "bad_braid"), column_(column)
    {
    }
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

struct BraidExpr
{
    // An atom has no children; a group is (children)^exponent.
    int gen = 0;
    bool inverse = false;
    std::vector<BraidExpr> children;
    int exponent = 1;
    bool group = false;

    bool operator==(const BraidExpr& o) const
    {
        return group == o.group && gen == o.gen && inverse == o.inverse && exponent == o.exponent &&
               children == o.children;
    }

    int max_gen() const
    {
        int g = gen;
        for (auto& c : children)
            g = std::max(g, c.max_gen());
        return g;
    }

    void append_to(std::vector<Letter>& out) const
    {
        if (!group)
        {
            out.push_back({gen, inverse ? -1 : 1});
            return;
        }
        std::vector<Letter> body;
        for (auto& c : children)
            c.append_to(body);
        for (int t = 0; t < std::abs(exponent); ++t)
        {
            if (exponent > 0)
                out.insert(out.end(), body.begin(), body.end());
            else
                for (auto it = body.rbegin(); it != body.rend(); ++it)
                    out.push_back({it->gen, -it->exponent});
        }
    }
};

// A parsed expression is a sequence of terms.
using BraidTerms = std::vector<BraidExpr>;

namespace detail
{

class BraidParser
{
public:
    explicit BraidParser(const std::string& s) : s_(s) {}

    BraidTerms parse()
    {
        BraidTerms terms = expr();
        skip();
        if (p_ < s_.size())
            fail(s_[p_] == ')' ? "unmatched ')'" : "unexpected character '" + std::string(1, s_[p_]) + "'");
        return terms;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw BraidSyntaxError(msg, p_ + 1); }

    void skip()
    {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_])))
            ++p_;
    }

    int integer(bool allow_sign)
    {
        skip();
        std::size_t start = p_;
        bool neg = false;
        if (p_ < s_.size() && (s_[p_] == '-' || s_[p_] == '+'))
        {
            if (!allow_sign)
                fail("sign not allowed here");
            neg = s_[p_] == '-';
            ++p_;
        }
        if (p_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p_])))
            fail("expected an integer");
        long long v = 0;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_])))
        {
            v = v * 10 + (s_[p_] - '0');
            if (v > 1000000)
            {
                p_ = start;
                fail("integer too large");
            }
            ++p_;
        }
        return static_cast<int>(neg ? -v : v);
    }

    BraidTerms expr()
    {
        BraidTerms terms;
        for (;;)
        {
            skip();
            if (p_ >= s_.size() || s_[p_] == ')')
                break;
            terms.push_back(term());
        }
        if (terms.empty())
            fail(p_ < s_.size() ? "empty group" : "expected a braid generator");
        return terms;
    }

    BraidExpr term()
    {
        BraidExpr e;
        if (s_[p_] == 's')
        {
            ++p_;
            std::size_t at = p_;
            if (p_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[p_])))
                fail("expected a generator index after 's'");
            e.gen = integer(false);
            if (e.gen == 0)
            {
                p_ = at;
                fail("generator index must be at least 1");
            }
            if (p_ < s_.size() && s_[p_] == '\'')
            {
                e.inverse = true;
                ++p_;
            }
            return e;
        }
        if (s_[p_] == '(')
        {
            ++p_;
            e.group = true;
            e.children = expr();
            skip();
            if (p_ >= s_.size() || s_[p_] != ')')
                fail("expected ')'");
            ++p_;
            skip();
            if (p_ >= s_.size() || s_[p_] != '^')
                fail("expected '^' after ')'");
            ++p_;
            e.exponent = integer(true);
            return e;
        }
        fail("unexpected character '" + std::string(1, s_[p_]) + "'");
    }

    const std::string& s_;
    std::size_t p_ = 0;
};

inline void print_terms(const BraidTerms& terms, std::string& out)
{
    for (std::size_t t = 0; t < terms.size(); ++t)
    {
        if (t)
            out += ' ';
        const BraidExpr& e = terms[t];
        if (!e.group)
        {
            out += 's' + std::to_string(e.gen) + (e.inverse ? "'" : "");
            continue;
        }
        out += '(';
        print_terms(e.children, out);
        out += ")^" + std::to_string(e.exponent);
    }
}

} // namespace detail

inline BraidTerms parse_braid(const std::string& text) { return detail::BraidParser(text).parse(); }

inline std::string to_string(const BraidTerms& terms)
{
    std::string out;
    detail::print_terms(terms, out);
    return out;
}

// Flattens to a word on `strands` strands; 0 means one more than the
// largest generator.
inline BraidWord flatten(const BraidTerms& terms, int strands = 0)
{
    int top = 0;
    for (auto& t : terms)
        top = std::max(top, t.max_gen());
    BraidWord w(strands > 0 ? strands : top + 1, {});
    for (auto& t : terms)
        t.append_to(w.letters);
    w.validate();
    return w;
}

inline BraidWord parse_braid_word(const std::string& text, int strands = 0)
{
    return flatten(parse_braid(text), strands);
}

} // namespace khmorse

#endif
