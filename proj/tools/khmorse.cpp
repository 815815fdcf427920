// khmorse: command-line front end for the Khovanov homology library.
//
//   khmorse homology --braid "(s1 s2)^3" --closure --format json
//   khmorse morse    --braid "(s1)^5"
//   khmorse reduce   --i 0 --j 0 --k 12 --m -16 --family omega4
//   khmorse scan     --family omega4 --window -1 1 1 4
//   khmorse oracle   --braid "s1 s2 s1" --closure
//   khmorse jones    --braid "s1 s2' s1 s2'"
//
// Output goes to --out (default stdout) only after the whole result has been
// computed.  Failures print one JSON object on stderr and exit with 2 (bad
// input), 3 (budget exceeded) or 4 (internal invariant violated).
#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <khmorse/braid_expr.hpp>
#include <khmorse/oracle.hpp>
#include <khmorse/planar_io.hpp>
#include <khmorse/reduce.hpp>

using namespace khmorse;
using ojson = nlohmann::ordered_json;

namespace
{

struct Config
{
    std::string braid;
    bool closure = false;
    std::string diagram;
    std::vector<std::string> inputs;
    std::string format = "json";
    std::size_t budget = std::size_t(1) << 22;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out;
    // reduce
    int i = 0, j = 0, k = 0, m = 0, a = 0, b = 0;
    std::string family = "omega4";
    std::string t_braid;
    // scan
    std::vector<int> window;
};

ojson big_to_json(const BigInt& v)
{
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s)
        out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string render_homology(const BigradedHomology& H, const ojson& input, const std::string& format)
{
    if (format == "csv")
    {
        std::ostringstream os;
        os << "i,j,free,torsion\n";
        for (auto& [ij, g] : H)
        {
            os << ij.first << "," << ij.second << "," << g.free << ",";
            for (std::size_t t = 0; t < g.torsion.size(); ++t)
                os << (t ? ";" : "") << g.torsion[t];
            os << "\n";
        }
        return os.str();
    }
    ojson out;
    out["input"] = input;
    out["groups"] = ojson::array();
    for (auto& [ij, g] : H)
    {
        ojson t = ojson::array();
        for (auto& x : g.torsion)
            t.push_back(big_to_json(x));
        out["groups"].push_back({{"i", ij.first}, {"j", ij.second}, {"free", g.free}, {"torsion", t}});
    }
    return out.dump(2) + "\n";
}

PipelineOptions pipeline_options(const Config& cfg)
{
    PipelineOptions o;
    o.budget = cfg.budget;
    o.threads = cfg.threads;
    return o;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read " + path, "bad_file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BraidWord require_braid(const Config& cfg)
{
    if (cfg.braid.empty())
        throw ParseError("--braid is required", "missing_braid");
    return parse_braid_word(cfg.braid);
}

// A word for an input disc with `points` boundary points; "", "-" or "e"
// stand for the empty tangle.
BraidWord input_word(const std::string& text, int points)
{
    if (text.empty() || text == "-" || text == "e")
    {
        if (points != 0)
            throw ParseError("an empty input needs a disc without points", "boundary_mismatch");
        return BraidWord(1, {});
    }
    if (points % 2 || points == 0)
        throw ParseError("braid given for a disc with " + std::to_string(points) + " points", "boundary_mismatch");
    return parse_braid_word(text, points / 2);
}

std::string cmd_homology(const Config& cfg)
{
    PipelineOptions opt = pipeline_options(cfg);
    if (!cfg.diagram.empty())
    {
        PlanarArcDiagram D = parse_diagram(read_file(cfg.diagram));
        if (static_cast<int>(cfg.inputs.size()) != D.arity())
            throw ParseError("diagram has " + std::to_string(D.arity()) + " inputs but " +
                                 std::to_string(cfg.inputs.size()) + " --input values were given",
                             "arity_mismatch");
        std::vector<BraidWord> words;
        ojson in = ojson::array();
        for (int d = 0; d < D.arity(); ++d)
        {
            words.push_back(input_word(cfg.inputs[d], D.inputs()[d]));
            in.push_back(words.back().to_string());
        }
        BigradedHomology H = diagram_homology(D, words, opt);
        return render_homology(H, {{"diagram", to_json(D)}, {"inputs", in}}, cfg.format);
    }
    BraidWord w = require_braid(cfg);
    if (!cfg.closure)
        throw ParseError("homology of a braid needs --closure (or use --diagram)", "missing_closure");
    BigradedHomology H = closure_homology(w, opt);
    return render_homology(H, {{"braid", w.to_string()}, {"closure", true}}, cfg.format);
}

std::string cmd_oracle(const Config& cfg)
{
    BraidWord w = require_braid(cfg);
    if (!cfg.closure)
        throw ParseError("the oracle computes closures; pass --closure", "missing_closure");
    BigradedHomology H = khovanov_direct(w, 14, cfg.threads);
    return render_homology(H, {{"braid", w.to_string()}, {"closure", true}, {"method", "state_sum"}},
                           cfg.format);
}

std::string cmd_morse(const Config& cfg)
{
    BraidWord w = require_braid(cfg);
    PipelineOptions opt = pipeline_options(cfg);
    BasedComplex C = braid_complex(w, opt);
    if (cfg.closure)
        C = simplify(compose_complexes(closure(w.strands), {&C}, opt.budget), opt);
    // Deterministic numbering: sort cells by (hdeg, qshift, object, label).
    std::vector<CellId> order(C.size());
    for (std::size_t x = 0; x < C.size(); ++x)
        order[x] = static_cast<CellId>(x);
    auto key = [&](CellId x) {
        const Cell& c = C.cell(x);
        return std::make_tuple(c.hdeg, c.qshift, c.object.to_string(), c.label);
    };
    std::stable_sort(order.begin(), order.end(), [&](CellId x, CellId y) { return key(x) < key(y); });
    std::map<CellId, std::size_t> index;
    for (std::size_t n = 0; n < order.size(); ++n)
        index[order[n]] = n;
    struct Entry
    {
        std::size_t from, to;
        std::string morphism;
    };
    std::vector<Entry> entries;
    for (CellId x : order)
        for (auto& [y, f] : C.row(x))
            entries.push_back({index[x], index[y], f.to_string()});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& p, const Entry& q) { return std::tie(p.from, p.to) < std::tie(q.from, q.to); });
    if (cfg.format == "csv")
    {
        std::ostringstream os;
        os << "id,hdeg,qshift,object,label\n";
        for (std::size_t n = 0; n < order.size(); ++n)
        {
            const Cell& c = C.cell(order[n]);
            os << n << "," << c.hdeg << "," << c.qshift << "," << csv_quote(c.object.to_string()) << ","
               << csv_quote(c.label) << "\n";
        }
        os << "\nfrom,to,morphism\n";
        for (auto& e : entries)
            os << e.from << "," << e.to << "," << csv_quote(e.morphism) << "\n";
        return os.str();
    }
    ojson out;
    out["input"] = {{"braid", w.to_string()}, {"closure", cfg.closure}};
    out["cells"] = ojson::array();
    for (std::size_t n = 0; n < order.size(); ++n)
    {
        const Cell& c = C.cell(order[n]);
        out["cells"].push_back({{"id", n},
                                {"hdeg", c.hdeg},
                                {"qshift", c.qshift},
                                {"object", c.object.to_string()},
                                {"label", c.label}});
    }
    out["differential"] = ojson::array();
    for (auto& e : entries)
        out["differential"].push_back({{"from", e.from}, {"to", e.to}, {"morphism", e.morphism}});
    return out.dump(2) + "\n";
}

DiagramContext reduce_context(const Config& cfg)
{
    if (!cfg.diagram.empty())
    {
        PlanarArcDiagram D = parse_diagram(read_file(cfg.diagram));
        if (D.arity() != 3)
            throw ParseError("reduce needs a 3-input diagram", "bad_diagram");
        return DiagramContext::make(D, input_word(cfg.t_braid, D.inputs()[2]));
    }
    if (cfg.family == "omega4")
        return omega4_context();
    if (cfg.family == "omega5")
        return omega5_context();
    throw ParseError("reduce knows the omega4 and omega5 diagrams, got '" + cfg.family + "'", "bad_family");
}

ojson params_json(const ReductionParams& p)
{
    return {{"i", p.i}, {"j", p.j}, {"k", p.k}, {"m", p.m}, {"a", p.a}, {"b", p.b}};
}

std::string cmd_reduce(const Config& cfg)
{
    if (cfg.a < 0 || cfg.b < 0)
        throw ParseError("--a and --b must be nonnegative", "bad_window");
    DiagramContext c = reduce_context(cfg);
    Reduction r = reduce_parameters({cfg.i, cfg.j, cfg.k, cfg.m, cfg.a, cfg.b}, c);
    IndexSets s = index_sets(cfg.a, cfg.b, c);
    bool in_m = std::binary_search(s.M.begin(), s.M.end(), r.output.m);
    bool in_k = std::binary_search(s.K_reach.begin(), s.K_reach.end(), r.output.k);
    if (cfg.format == "csv")
    {
        std::ostringstream os;
        os << "step,rule,i,j,k,m,a,b,guard_holds\n";
        os << "0,input," << cfg.i << "," << cfg.j << "," << cfg.k << "," << cfg.m << "," << cfg.a << "," << cfg.b
           << ",true\n";
        for (std::size_t n = 0; n < r.trace.size(); ++n)
        {
            auto& st = r.trace[n];
            auto& p = st.after;
            os << n + 1 << "," << st.rule << "," << p.i << "," << p.j << "," << p.k << "," << p.m << "," << p.a
               << "," << p.b << "," << (st.guard_holds ? "true" : "false") << "\n";
        }
        os << r.trace.size() + 1 << ",output," << r.output.i << "," << r.output.j << "," << r.output.k << ","
           << r.output.m << "," << r.output.a << "," << r.output.b << "," << (in_k && in_m ? "true" : "false")
           << "\n";
        return os.str();
    }
    ojson out;
    out["context"] = {{"s", c.s}, {"h_min", c.h_min}, {"h_max", c.h_max}, {"q_min", c.q_min}, {"q_max", c.q_max}};
    out["input"] = params_json(r.input);
    out["trace"] = ojson::array();
    for (auto& st : r.trace)
    {
        ojson row = params_json(st.after);
        row["rule"] = st.rule;
        row["guard_holds"] = st.guard_holds;
        out["trace"].push_back(row);
    }
    out["output"] = params_json(r.output);
    out["M"] = {{"min", s.M.front()}, {"max", s.M.back()}};
    out["K_literal"] = {{"low", to_string(s.k_low)}, {"high", to_string(s.k_high)}, {"size", s.K.size()}};
    out["K"] = {{"min", s.K_reach.front()}, {"max", s.K_reach.back()}};
    out["k2_in_K"] = in_k;
    out["m2_in_M"] = in_m;
    return out.dump(2) + "\n";
}

std::string cmd_scan(const Config& cfg)
{
    Family f = parse_family(cfg.family);
    if (cfg.window.size() != 4)
        throw ParseError("--window needs kmin kmax mmin mmax", "bad_window");
    ScanWindow w{cfg.window[0], cfg.window[1], cfg.window[2], cfg.window[3]};
    if (family_uses_m(f) && w.m_min <= 0 && w.m_min <= w.m_max)
        throw ParseError(cfg.family + " needs m > 0", "bad_window");
    TorsionReport rep = scan_family(f, w, pipeline_options(cfg));
    if (cfg.format == "csv")
    {
        std::ostringstream os;
        os << "family,k,m,braid,torsion_orders,max_order,skipped\n";
        for (auto& r : rep.rows)
        {
            os << r.family << "," << r.k << "," << r.m << "," << csv_quote(r.braid) << ",";
            for (std::size_t t = 0; t < r.torsion_orders.size(); ++t)
                os << (t ? ";" : "") << r.torsion_orders[t];
            os << "," << r.max_order << "," << (r.skipped ? "true" : "false") << "\n";
        }
        return os.str();
    }
    ojson out;
    out["rows"] = ojson::array();
    for (auto& r : rep.rows)
    {
        ojson t = ojson::array();
        for (auto& x : r.torsion_orders)
            t.push_back(big_to_json(x));
        ojson row{{"family", r.family}, {"k", r.k},           {"m", r.m},
                  {"braid", r.braid},   {"torsion_orders", t}, {"max_order", big_to_json(r.max_order)}};
        if (r.skipped)
            row["skipped"] = r.reason;
        out["rows"].push_back(row);
    }
    out["aggregate"] = {{"only_Z2", rep.only_Z2}, {"checked", rep.checked}, {"skipped", rep.skipped}};
    return out.dump(2) + "\n";
}

ojson poly_json(const LaurentPoly& p)
{
    ojson a = ojson::array();
    for (auto& [e, c] : p.terms())
        a.push_back({e, c});
    return a;
}

std::string cmd_jones(const Config& cfg)
{
    BraidWord w = require_braid(cfg);
    LaurentPoly chi = graded_euler_characteristic(closure_homology(w, pipeline_options(cfg)));
    LaurentPoly jones = kauffman_bracket_jones(w);
    LaurentPoly diff = chi - jones;
    if (cfg.format == "csv")
    {
        std::ostringstream os;
        std::set<int> exps;
        for (auto* p : {&chi, &jones})
            for (auto& [e, c] : p->terms())
                exps.insert(e);
        os << "exponent,euler,jones,difference\n";
        for (int e : exps)
            os << e << "," << chi.coeff(e) << "," << jones.coeff(e) << "," << diff.coeff(e) << "\n";
        return os.str();
    }
    ojson out;
    out["input"] = {{"braid", w.to_string()}, {"closure", true}};
    out["euler"] = {{"text", chi.to_string()}, {"terms", poly_json(chi)}};
    out["jones"] = {{"text", jones.to_string()}, {"terms", poly_json(jones)}};
    out["difference"] = {{"text", diff.to_string()}, {"terms", poly_json(diff)}};
    out["equal"] = diff.is_zero();
    return out.dump(2) + "\n";
}

void print_error(const std::string& kind, const std::string& code, const std::string& message)
{
    ojson e{{"error", {{"kind", kind}, {"code", code}, {"message", message}}}};
    std::cerr << e.dump() << "\n";
}

void add_common(CLI::App* sub, Config& cfg)
{
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--budget", cfg.budget, "largest intermediate complex, in cells")->check(CLI::PositiveNumber);
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out, "output file (default stdout)");
}

} // namespace

int main(int argc, char** argv)
{
    Config cfg;
    CLI::App app{"Integral Khovanov homology of braid closures via discrete Morse theory"};
    app.require_subcommand(1);

    auto* hom = app.add_subcommand("homology", "homology table of a braid closure or a planar assembly");
    hom->add_option("--braid", cfg.braid, "braid expression, e.g. \"(s1 s2)^3 s1'\"");
    hom->add_flag("--closure", cfg.closure, "close the braid");
    hom->add_option("--diagram", cfg.diagram, "planar arc diagram JSON file");
    hom->add_option("--input", cfg.inputs, "braid per diagram input (\"-\" for an empty input)");
    add_common(hom, cfg);

    auto* mor = app.add_subcommand("morse", "reduced complex of a braid");
    mor->add_option("--braid", cfg.braid, "braid expression");
    mor->add_flag("--closure", cfg.closure, "close the braid before printing");
    add_common(mor, cfg);

    auto* red = app.add_subcommand("reduce", "parameter reduction with its trace");
    red->add_option("--i", cfg.i);
    red->add_option("--j", cfg.j);
    red->add_option("--k", cfg.k);
    red->add_option("--m", cfg.m);
    red->add_option("--a", cfg.a, "homological window size");
    red->add_option("--b", cfg.b, "internal window size");
    red->add_option("--family", cfg.family, "omega4 or omega5");
    red->add_option("--diagram", cfg.diagram, "3-input diagram JSON instead of a built-in one");
    red->add_option("--t", cfg.t_braid, "braid on the third input of --diagram");
    add_common(red, cfg);

    auto* scan = app.add_subcommand("scan", "torsion over a window of a 3-braid family");
    scan->add_option("--family", cfg.family, "omega0..omega5, torus3 or torus3-s1")->required();
    scan->add_option("--window", cfg.window, "kmin kmax mmin mmax")->expected(4)->required();
    add_common(scan, cfg);

    auto* ora = app.add_subcommand("oracle", "homology from the state-sum complex");
    ora->add_option("--braid", cfg.braid, "braid expression");
    ora->add_flag("--closure", cfg.closure, "close the braid");
    add_common(ora, cfg);

    auto* jon = app.add_subcommand("jones", "graded Euler characteristic against the Kauffman bracket");
    jon->add_option("--braid", cfg.braid, "braid expression");
    add_common(jon, cfg);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        print_error("parse", "bad_arguments", e.what());
        return static_cast<int>(ErrorKind::parse);
    }

    try
    {
        std::string text;
        if (hom->parsed())
            text = cmd_homology(cfg);
        else if (mor->parsed())
            text = cmd_morse(cfg);
        else if (red->parsed())
            text = cmd_reduce(cfg);
        else if (scan->parsed())
            text = cmd_scan(cfg);
        else if (ora->parsed())
            text = cmd_oracle(cfg);
        else
            text = cmd_jones(cfg);
        if (cfg.out.empty())
            std::cout << text;
        else
        {
            std::ofstream f(cfg.out);
            if (!f)
                throw ParseError("cannot write " + cfg.out, "bad_file");
            f << text;
        }
    }
    catch (const Error& e)
    {
        static const char* kinds[] = {"", "", "parse", "budget", "invariant"};
        print_error(kinds[e.exit_code()], e.code(), e.what());
        return e.exit_code();
    }
    catch (const std::exception& e)
    {
        print_error("invariant", "internal_error", e.what());
        return static_cast<int>(ErrorKind::invariant);
    }
    return 0;
}
