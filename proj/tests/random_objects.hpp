// Random crossingless tangles and cobordism generators shared by the tests.
#ifndef KHMORSE_TESTS_RANDOM_OBJECTS_HPP
#define KHMORSE_TESTS_RANDOM_OBJECTS_HPP

#include <algorithm>
#include <random>
#include <vector>

#include <khmorse/cob.hpp>

namespace khmorse::fixtures
{

inline void fill_noncrossing(std::vector<std::uint8_t>& p, int lo, int hi, std::mt19937& rng)
{
    if (lo >= hi)
        return;
    int half = (hi - lo) / 2;
    int k = std::uniform_int_distribution<int>(0, half - 1)(rng);
    int mate = lo + 2 * k + 1;
    p[lo] = static_cast<std::uint8_t>(mate);
    p[mate] = static_cast<std::uint8_t>(lo);
    fill_noncrossing(p, lo + 1, mate, rng);
    fill_noncrossing(p, mate + 1, hi, rng);
}

inline Tangle random_tangle(int b, int max_circles, std::mt19937& rng)
{
    std::vector<std::uint8_t> p(2 * b);
    fill_noncrossing(p, 0, 2 * b, rng);
    int c = std::uniform_int_distribution<int>(0, max_circles)(rng);
    return Tangle(p, c);
}

// A random generator between the given tangles, possibly of higher genus or
// with several dots on a component.
inline CobGenerator random_generator(const Tangle& dom, const Tangle& cod, std::mt19937& rng,
                                     int max_genus = 1, int max_dots = 2)
{
    SegmentLayout L(dom, cod);
    int n = L.size();
    int parts = std::uniform_int_distribution<int>(1, std::max(1, n))(rng);
    CobGenerator g{dom, cod, {}};
    g.components.resize(parts);
    // Arcs on one wall cycle travel together; circles are placed freely.
    for (auto& cyc : wall_cycle_segments(dom, cod))
    {
        int c = std::uniform_int_distribution<int>(0, parts - 1)(rng);
        for (std::size_t i = 0; i < cyc.size(); ++i)
            if (std::find(cyc.begin(), cyc.begin() + i, cyc[i]) == cyc.begin() + i)
                g.components[c].segments.push_back(cyc[i]);
    }
    for (int s = 0; s < n; ++s)
        if (L.is_circle(s))
            g.components[std::uniform_int_distribution<int>(0, parts - 1)(rng)].segments.push_back(s);
    std::vector<CobComponent> kept;
    for (auto& c : g.components)
        if (!c.segments.empty())
        {
            c.genus = std::uniform_int_distribution<int>(0, max_genus)(rng);
            c.dots = std::uniform_int_distribution<int>(0, max_dots)(rng);
            // Bias towards normal pieces so compositions stay nonzero often.
            if (std::uniform_int_distribution<int>(0, 2)(rng) != 0)
            {
                c.genus = 0;
                c.dots = std::min(c.dots, 1);
            }
            kept.push_back(c);
        }
    g.components = kept;
    return g;
}

inline DottedMorphism random_morphism(const Tangle& dom, const Tangle& cod, std::mt19937& rng,
                                      int terms = 2)
{
    DottedMorphism m(dom, cod);
    for (int t = 0; t < terms; ++t)
    {
        Coeff c = std::uniform_int_distribution<int>(-3, 3)(rng);
        m += normalize(random_generator(dom, cod, rng), c);
    }
    return m;
}

} // namespace khmorse::fixtures

#endif
