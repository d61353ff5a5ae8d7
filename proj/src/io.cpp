#include "funnel/io.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <limits>
#include <sstream>

namespace funnel {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_tokens(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t')
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what)
{
    throw error(error_code::malformed_line, "line " + std::to_string(line_no) + ": " + what);
}

std::uint64_t parse_number(std::string_view token, std::size_t line_no)
{
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        malformed(line_no, "expected a non-negative integer, got '" + std::string(token) + "'");
    return value;
}

vertex_id parse_vertex(std::string_view token, std::size_t line_no)
{
    const std::uint64_t value = parse_number(token, line_no);
    if (value >= std::numeric_limits<vertex_id>::max())
        malformed(line_no, "vertex id out of range");
    return static_cast<vertex_id>(value);
}

// Calls `on_line(line_no, tokens)` for every non-blank, non-comment line.
template <typename F>
void for_each_line(std::string_view text, F&& on_line)
{
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        ++line_no;
        const std::string_view line = trim(text.substr(pos, end - pos));
        if (!line.empty() && line.front() != '#')
            on_line(line_no, split_tokens(line));
        if (end == text.size())
            break;
        pos = end + 1;
    }
}

}  // namespace

dag parse_edge_list(std::string_view text)
{
    std::optional<std::pair<std::uint64_t, std::uint64_t>> header;
    bool seen_arc = false;
    std::vector<arc> arcs;
    std::map<arc, std::size_t> first_line;
    std::uint64_t max_id = 0;

    for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
        if (tokens.front() == "p") {
            if (header || seen_arc)
                malformed(line_no, "header line must appear once, before any arc");
            if (tokens.size() != 3)
                malformed(line_no, "header must read 'p <n> <m>'");
            header.emplace(parse_number(tokens[1], line_no), parse_number(tokens[2], line_no));
            return;
        }
        if (tokens.size() != 2)
            malformed(line_no, "expected two vertex ids");
        const arc a{parse_vertex(tokens[0], line_no), parse_vertex(tokens[1], line_no)};
        if (a.tail == a.head)
            throw error(error_code::self_loop,
                        "line " + std::to_string(line_no) + ": self-loop at vertex " + std::to_string(a.tail));
        if (auto [it, inserted] = first_line.emplace(a, line_no); !inserted)
            throw error(error_code::duplicate_arc, "line " + std::to_string(line_no) + ": arc repeats line " +
                                                       std::to_string(it->second));
        if (header && (a.tail >= header->first || a.head >= header->first))
            malformed(line_no, "vertex id exceeds header vertex count");
        max_id = std::max<std::uint64_t>(max_id, std::max(a.tail, a.head));
        seen_arc = true;
        arcs.push_back(a);
    });

    std::size_t vertex_count = arcs.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
    if (header) {
        if (header->second != arcs.size())
            throw error(error_code::malformed_line, "header announces " + std::to_string(header->second) +
                                                        " arcs but " + std::to_string(arcs.size()) + " were read");
        vertex_count = static_cast<std::size_t>(header->first);
    }
    return dag::from_arcs(vertex_count, std::move(arcs));
}

raw_digraph parse_raw_digraph(std::string_view text, bool named)
{
    raw_digraph result;
    std::map<std::string, vertex_id, std::less<>> ids;
    std::optional<std::uint64_t> header_n;
    std::uint64_t max_id = 0;
    auto vertex = [&](std::string_view token, std::size_t line_no) -> vertex_id {
        if (!named) {
            const vertex_id v = parse_vertex(token, line_no);
            max_id = std::max<std::uint64_t>(max_id, v);
            return v;
        }
        auto it = ids.find(token);
        if (it != ids.end())
            return it->second;
        const auto v = static_cast<vertex_id>(result.names.size());
        result.names.emplace_back(token);
        ids.emplace(std::string(token), v);
        return v;
    };
    for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
        if (!named && tokens.front() == "p") {
            if (header_n || !result.arcs.empty())
                malformed(line_no, "header line must appear once, before any arc");
            if (tokens.size() != 3)
                malformed(line_no, "header must read 'p <n> <m>'");
            header_n = parse_number(tokens[1], line_no);
            return;
        }
        if (tokens.size() != 2)
            malformed(line_no, "expected two vertex ids");
        result.arcs.push_back({vertex(tokens[0], line_no), vertex(tokens[1], line_no)});
    });
    if (named)
        result.vertex_count = result.names.size();
    else if (header_n)
        result.vertex_count = static_cast<std::size_t>(*header_n);
    else
        result.vertex_count = result.arcs.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
    for (const arc& a : result.arcs)
        if (a.tail >= result.vertex_count || a.head >= result.vertex_count)
            throw error(error_code::malformed_line, "vertex id exceeds header vertex count");
    return result;
}

std::string emit_edge_list(const dag& g)
{
    std::ostringstream out;
    out << "p " << g.vertex_count() << ' ' << g.arc_count() << '\n';
    for (const arc& a : g.arcs())
        out << a.tail << ' ' << a.head << '\n';
    return out.str();
}

std::string emit_dot(const dag& g, const arc_set& highlight, const std::optional<labeling>& labels)
{
    std::ostringstream out;
    out << "digraph funnel {\n";
    for (vertex_id v = 0; v < g.vertex_count(); ++v) {
        out << "  " << v;
        if (labels && (*labels)[v] != label::unassigned) {
            const bool fork = (*labels)[v] == label::fork;
            out << " [label=\"" << v << ' ' << (fork ? 'F' : 'M') << "\", shape=" << (fork ? "box" : "ellipse")
                << ']';
        }
        out << ";\n";
    }
    for (const arc& a : g.arcs()) {
        out << "  " << a.tail << " -> " << a.head;
        if (highlight.contains(a))
            out << " [style=dashed]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string emit_labeling(const labeling& labels)
{
    std::ostringstream out;
    for (vertex_id v = 0; v < labels.size(); ++v) {
        if (labels[v] == label::unassigned)
            continue;
        out << v << ' ' << (labels[v] == label::fork ? 'F' : 'M') << '\n';
    }
    return out.str();
}

labeling parse_labeling(std::string_view text, std::size_t vertex_count)
{
    labeling result(vertex_count);
    for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& tokens) {
        if (tokens.size() != 2)
            malformed(line_no, "expected '<vertex-id> <F|M>'");
        const vertex_id v = parse_vertex(tokens[0], line_no);
        if (v >= vertex_count)
            malformed(line_no, "vertex id out of range");
        if (tokens[1] == "F")
            result[v] = label::fork;
        else if (tokens[1] == "M")
            result[v] = label::merge;
        else
            malformed(line_no, "label must be F or M");
    });
    return result;
}

}  // namespace funnel
