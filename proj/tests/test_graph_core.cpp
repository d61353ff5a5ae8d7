#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "funnel/dag.hpp"
#include "funnel/io.hpp"
#include "oracles.hpp"

using namespace funnel;

namespace {

std::vector<arc> arcs_of(const dag& g)
{
    return {g.arcs().begin(), g.arcs().end()};
}

std::vector<vertex_id> order_of(const dag& g)
{
    return {g.topo_order().begin(), g.topo_order().end()};
}

template <class F>
error_code code_of(F&& f)
{
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return error_code::domain_error;
}

}  // namespace

TEST_CASE("parse_edge_list reads a path")
{
    const dag g = parse_edge_list("0 1\n1 2");
    CHECK(g.vertex_count() == 3);
    CHECK(arcs_of(g) == std::vector<arc>{{0, 1}, {1, 2}});
    CHECK(order_of(g) == std::vector<vertex_id>{0, 1, 2});
}

TEST_CASE("parse_edge_list reads the diamond")
{
    const dag g = parse_edge_list("0 1\n0 2\n1 3\n2 3");
    CHECK(g.vertex_count() == 4);
    CHECK(g.arc_count() == 4);
}

TEST_CASE("parse_edge_list errors")
{
    CHECK(code_of([] { parse_edge_list("0 1\n1 0"); }) == error_code::cycle_detected);
    CHECK(code_of([] { parse_edge_list("0 0"); }) == error_code::self_loop);
    CHECK(code_of([] { parse_edge_list("0 1\n0 1"); }) == error_code::duplicate_arc);
    CHECK(code_of([] { parse_edge_list("0 1\nx 2"); }) == error_code::malformed_line);
    CHECK(code_of([] { parse_edge_list("0 1 2"); }) == error_code::malformed_line);
    CHECK(code_of([] { parse_edge_list("0 -1"); }) == error_code::malformed_line);

    try {
        parse_edge_list("# comment\n0 1\n\n1 q\n");
        FAIL("expected MalformedLine");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
}

TEST_CASE("parse_edge_list comments and header")
{
    const dag g = parse_edge_list("# a comment\np 5 2\n0 1\n# another\n3 4\n");
    CHECK(g.vertex_count() == 5);
    CHECK(g.arc_count() == 2);
    CHECK(code_of([] { parse_edge_list("p 3 2\n0 1\n"); }) == error_code::malformed_line);
    CHECK(code_of([] { parse_edge_list("p 2 1\n0 5\n"); }) == error_code::malformed_line);
    CHECK(code_of([] { parse_edge_list("0 1\np 2 1\n"); }) == error_code::malformed_line);
    CHECK(parse_edge_list("").vertex_count() == 0);
}

TEST_CASE("edge list round trip")
{
    std::mt19937_64 gen(11);
    for (int i = 0; i < 50; ++i) {
        const dag g = oracle::random_dag(gen, 1 + i % 15, 0.3);
        const dag back = parse_edge_list(emit_edge_list(g));
        CHECK(back == g);
        CHECK(arcs_of(back) == arcs_of(g));
    }
}

TEST_CASE("topological_order examples")
{
    CHECK(topological_order(oracle::path(3)) == std::vector<vertex_id>{0, 1, 2});
    CHECK(topological_order(oracle::diamond()) == std::vector<vertex_id>{0, 1, 2, 3});
    CHECK(topological_order(dag::from_arcs(3, {})) == std::vector<vertex_id>{0, 1, 2});
    // Min-id among ready vertices, not insertion order.
    CHECK(topological_order(dag::from_arcs(4, {{3, 0}, {2, 1}})) == std::vector<vertex_id>{2, 1, 3, 0});
}

TEST_CASE("topological_order is valid and deterministic on random DAGs")
{
    std::mt19937_64 gen(5);
    for (int i = 0; i < 100; ++i) {
        const dag g = oracle::random_dag(gen, 1 + i % 25, 0.25);
        const auto order = topological_order(g);
        CHECK(order == topological_order(g));
        for (const arc& a : g.arcs())
            CHECK(g.topo_position(a.tail) < g.topo_position(a.head));
        for (std::size_t i2 = 0; i2 < order.size(); ++i2)
            CHECK(g.topo_position(order[i2]) == i2);
    }
}

TEST_CASE("adjacency agrees with the arc list")
{
    std::mt19937_64 gen(9);
    const dag g = oracle::random_dag(gen, 30, 0.2);
    std::size_t out_total = 0, in_total = 0;
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        for (std::size_t i = 0; i < g.out_degree(v); ++i) {
            const arc a = g.arc_at(g.out_arcs(v)[i]);
            CHECK(a.tail == v);
            CHECK(a.head == g.out_neighbors(v)[i]);
        }
        for (std::size_t i = 0; i < g.in_degree(v); ++i) {
            const arc a = g.arc_at(g.in_arcs(v)[i]);
            CHECK(a.head == v);
            CHECK(a.tail == g.in_neighbors(v)[i]);
        }
        CHECK(std::is_sorted(g.out_neighbors(v).begin(), g.out_neighbors(v).end()));
        CHECK(std::is_sorted(g.in_neighbors(v).begin(), g.in_neighbors(v).end()));
        out_total += g.out_degree(v);
        in_total += g.in_degree(v);
    }
    CHECK(out_total == g.arc_count());
    CHECK(in_total == g.arc_count());
    CHECK(g.has_arc(g.arcs()[0].tail, g.arcs()[0].head));
}

TEST_CASE("delete_arcs examples")
{
    const dag p = oracle::path(3);
    const dag d1 = delete_arcs(p, {{0, 1}});
    CHECK(d1.vertex_count() == 3);
    CHECK(arcs_of(d1) == std::vector<arc>{{1, 2}});
    CHECK(delete_arcs(p, {}) == p);
    CHECK(arcs_of(delete_arcs(oracle::diamond(), {{1, 3}})) == std::vector<arc>{{0, 1}, {0, 2}, {2, 3}});
    CHECK(code_of([&] { delete_arcs(p, {{0, 2}}); }) == error_code::arc_not_present);
}

TEST_CASE("delete_arcs partitions the arc set")
{
    std::mt19937_64 gen(3);
    for (int i = 0; i < 50; ++i) {
        const dag g = oracle::random_dag(gen, 12, 0.35);
        arc_set removed;
        for (const arc& a : g.arcs())
            if (gen() % 3 == 0)
                removed.insert(a);
        const dag rest = delete_arcs(g, removed);
        CHECK(rest.vertex_count() == g.vertex_count());
        CHECK(rest.arc_count() + removed.size() == g.arc_count());
        for (const arc& a : rest.arcs())
            CHECK_FALSE(removed.contains(a));
        for (const arc& a : g.arcs())
            CHECK((rest.has_arc(a.tail, a.head) || removed.contains(a)));
    }
}

TEST_CASE("condense_scc examples")
{
    // a=0, b=1, c=2
    const std::vector<arc> two_cycle{{0, 1}, {1, 0}, {1, 2}};
    const condensation c1 = condense_scc(3, two_cycle);
    CHECK(c1.graph.vertex_count() == 2);
    CHECK(arcs_of(c1.graph) == std::vector<arc>{{0, 1}});
    CHECK(c1.component_of == std::vector<vertex_id>{0, 0, 1});

    const dag acyclic = oracle::diamond();
    const condensation c2 = condense_scc(4, acyclic.arcs());
    CHECK(c2.graph == acyclic);
    CHECK(c2.component_of == std::vector<vertex_id>{0, 1, 2, 3});

    // a=0, b=1, c=2, d=3
    const std::vector<arc> triangle{{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 3}};
    const condensation c3 = condense_scc(4, triangle);
    CHECK(c3.graph.vertex_count() == 2);
    CHECK(c3.graph.arc_count() == 1);
}

TEST_CASE("condense_scc drops self-loops and parallel arcs, output is a DAG")
{
    const std::vector<arc> raw{{0, 0}, {0, 1}, {0, 1}, {1, 2}, {2, 1}, {3, 3}};
    const condensation c = condense_scc(4, raw);
    CHECK(c.graph.vertex_count() == 3);
    CHECK(arcs_of(c.graph) == std::vector<arc>{{0, 1}});

    std::mt19937_64 gen(17);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + gen() % 20;
        std::vector<arc> arcs;
        for (std::size_t k = 0; k < 2 * n; ++k)
            arcs.push_back({static_cast<vertex_id>(gen() % n), static_cast<vertex_id>(gen() % n)});
        const condensation cc = condense_scc(n, arcs);
        for (const arc& a : arcs)
            if (cc.component_of[a.tail] != cc.component_of[a.head])
                CHECK(cc.graph.has_arc(cc.component_of[a.tail], cc.component_of[a.head]));
        CHECK_NOTHROW(dag::from_arcs(cc.graph.vertex_count(), arcs_of(cc.graph)));
    }
}

TEST_CASE("parse_raw_digraph keeps cycles and maps names")
{
    const raw_digraph raw = parse_raw_digraph("a b\nb a\nb c\n", true);
    CHECK(raw.vertex_count == 3);
    CHECK(raw.names == std::vector<std::string>{"a", "b", "c"});
    CHECK(raw.arcs == std::vector<arc>{{0, 1}, {1, 0}, {1, 2}});
    const raw_digraph ids = parse_raw_digraph("0 1\n1 0\n");
    CHECK(ids.vertex_count == 2);
    CHECK(ids.arcs.size() == 2);
}

TEST_CASE("emit_dot")
{
    const std::string plain = emit_dot(oracle::path(3));
    CHECK(plain.rfind("digraph", 0) == 0);
    std::size_t edges = 0;
    for (std::size_t pos = plain.find("->"); pos != std::string::npos; pos = plain.find("->", pos + 2))
        ++edges;
    CHECK(edges == 2);
    CHECK(plain.find("dashed") == std::string::npos);

    // D_0 with u2 -> v0 highlighted.
    const std::string d0 = emit_dot(oracle::forbidden(0), {{1, 2}});
    CHECK(d0.find("1 -> 2 [style=dashed]") != std::string::npos);
    CHECK(d0.find("0 -> 2;") != std::string::npos);

    labeling labels(4);
    labels[0] = labels[1] = labels[2] = label::fork;
    labels[3] = label::merge;
    const std::string labeled = emit_dot(oracle::diamond(), {}, labels);
    CHECK(labeled.find("label=\"0 F\"") != std::string::npos);
    CHECK(labeled.find("label=\"3 M\"") != std::string::npos);
}

TEST_CASE("labeling text round trip")
{
    labeling labels(3);
    labels[0] = label::fork;
    labels[2] = label::merge;
    const std::string text = emit_labeling(labels);
    CHECK(text == "0 F\n2 M\n");
    CHECK(parse_labeling(text, 3) == labels);
    CHECK(code_of([] { parse_labeling("0 X\n", 1); }) == error_code::malformed_line);
    CHECK(code_of([] { parse_labeling("4 F\n", 1); }) == error_code::malformed_line);
}
