/*
 * complex.hpp
 *
 * Based complexes over the dotted cobordism category: a finite list of
 * cells, each an object (a crossingless tangle, possibly carrying circles)
 * placed in a homological degree with an internal shift, together with a
 * sparse differential whose entries are DottedMorphisms from degree i to
 * degree i + 1.
 *
 * The same interface (size, hdeg, qshift, object, for_each_out) is also
 * provided by the implicit enhanced cube in cube.hpp, and the Morse
 * routines are written against that interface.
 */
#ifndef KHMORSE_COMPLEX_HPP
#define KHMORSE_COMPLEX_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cob.hpp"

namespace khmorse
{

using CellId = std::int64_t;
constexpr CellId no_cell = -1;

struct Cell
{
    int hdeg = 0;
    int qshift = 0;
    Tangle object;
    std::string label;               // enhanced word or other provenance tag
    std::vector<int> circle_origins; // crossing index (1-based) per circle, when known
};

class BasedComplex
{
public:
    using Row = std::map<CellId, DottedMorphism>;

    CellId add_cell(Cell c)
    {
        cells_.push_back(std::move(c));
        out_.emplace_back();
        return static_cast<CellId>(cells_.size()) - 1;
    }

    // Accumulate f into the entry from -> to.
    void add_entry(CellId from, CellId to, const DottedMorphism& f)
    {
        if (f.is_zero())
            return;
        if (cells_[to].hdeg != cells_[from].hdeg + 1)
            throw InvariantViolation("differential entry must raise hdeg by one");
        if (!(f.domain() == cells_[from].object) || !(f.codomain() == cells_[to].object))
            throw InvariantViolation("differential entry does not match cell objects",
                                     "incompatible_tangles");
        auto& row = out_[from];
        auto it = row.find(to);
        if (it == row.end())
            row.emplace(to, f);
        else
        {
            it->second += f;
            if (it->second.is_zero())
                row.erase(it);
        }
    }

    std::size_t size() const { return cells_.size(); }
    const Cell& cell(CellId c) const { return cells_[c]; }
    Cell& cell(CellId c) { return cells_[c]; }
    int hdeg(CellId c) const { return cells_[c].hdeg; }
    int qshift(CellId c) const { return cells_[c].qshift; }
    const Tangle& object(CellId c) const { return cells_[c].object; }
    const Row& row(CellId c) const { return out_[c]; }

    const DottedMorphism* entry(CellId from, CellId to) const
    {
        auto it = out_[from].find(to);
        return it == out_[from].end() ? nullptr : &it->second;
    }

    template <class F>
    void for_each_out(CellId c, F&& f) const
    {
        for (auto& [t, m] : out_[c])
            f(t, m);
    }

    // Calls f(target, unit, invertible) per nonzero entry, where unit is the
    // sign of an invertible entry and 0 otherwise.
    template <class F>
    void for_each_entry(CellId c, F&& f) const
    {
        for (auto& [t, m] : out_[c])
        {
            int u = m.invertible_sign();
            f(t, u, u != 0);
        }
    }

    std::string label(CellId c) const { return cells_[c].label; }

    std::size_t entry_count() const
    {
        std::size_t n = 0;
        for (auto& r : out_)
            n += r.size();
        return n;
    }

    // Cells grouped by homological degree, each group in id order.
    std::map<int, std::vector<CellId>> levels() const
    {
        std::map<int, std::vector<CellId>> out;
        for (CellId c = 0; c < static_cast<CellId>(size()); ++c)
            out[cells_[c].hdeg].push_back(c);
        return out;
    }

    // C[h]{q}: (C[h])^i = C^{i-h}, so every cell moves up by h.
    BasedComplex shifted(int h, int q) const
    {
        BasedComplex r = *this;
        for (auto& c : r.cells_)
        {
            c.hdeg += h;
            c.qshift += q;
        }
        return r;
    }

    // Throws unless d o d = 0.
    void check_d_squared() const
    {
        for (CellId a = 0; a < static_cast<CellId>(size()); ++a)
        {
            std::map<CellId, DottedMorphism> two;
            for (auto& [b, f] : out_[a])
                for (auto& [c, g] : out_[b])
                {
                    auto h = compose(g, f);
                    auto it = two.find(c);
                    if (it == two.end())
                        two.emplace(c, std::move(h));
                    else
                        it->second += h;
                }
            for (auto& [c, h] : two)
                if (!h.is_zero())
                    throw InvariantViolation("d o d != 0 from cell " + std::to_string(a) + " to " +
                                             std::to_string(c));
        }
    }

    // Throws unless every entry has internal degree zero.
    void check_degrees() const
    {
        for (CellId a = 0; a < static_cast<CellId>(size()); ++a)
            for (auto& [b, f] : out_[a])
                if (!f.is_zero() && degree(f) + cells_[b].qshift - cells_[a].qshift != 0)
                    throw InvariantViolation("differential entry of nonzero degree from cell " +
                                             std::to_string(a));
    }

    void check() const
    {
        check_degrees();
        check_d_squared();
    }

private:
    std::vector<Cell> cells_;
    std::vector<Row> out_;
};

// Copy any complex exposing the generic interface into a BasedComplex.
template <class C>
BasedComplex materialize(const C& src)
{
    BasedComplex out;
    for (CellId c = 0; c < static_cast<CellId>(src.size()); ++c)
        out.add_cell(Cell{src.hdeg(c), src.qshift(c), src.object(c), src.label(c), {}});
    for (CellId c = 0; c < static_cast<CellId>(src.size()); ++c)
        src.for_each_out(c, [&](CellId t, const DottedMorphism& f) { out.add_entry(c, t, f); });
    return out;
}

} // namespace khmorse

#endif
