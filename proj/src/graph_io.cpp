#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "gluedtrees/graph.hpp"
#include "gluedtrees/serialize.hpp"

namespace gluedtrees {

namespace {

// FNV-1a over everything written before the checksum line.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

std::string GluedTreesGraph::serialize() const {
  std::ostringstream out;
  out << "gluedtrees-graph v1\n";
  out << "n " << n_ << "\n";
  out << "seed " << graph_seed_ << "\n";
  out << "names " << (named_ ? 1 : 0);
  if (named_) out << " " << name_seed_;
  out << "\n";
  out << "coloring " << (colored_ ? 1 : 0);
  if (colored_) out << " " << color_seed_;
  out << "\n";
  if (named_) {
    out << "namelist " << vertex_count() << "\n";
    for (int v = 0; v < vertex_count(); ++v) out << names_[static_cast<std::size_t>(v)] << "\n";
  }
  out << "edges " << edge_count() << "\n";
  for (int v = 0; v < vertex_count(); ++v) {
    for (int s = 0; s < degree(v); ++s) {
      const int u = adj_[static_cast<std::size_t>(v)][static_cast<std::size_t>(s)];
      if (u <= v) continue;
      out << v << " " << u;
      if (colored_) out << " " << color_to_string(edge_color(v, s));
      out << "\n";
    }
  }
  std::string body = out.str();
  std::ostringstream tail;
  tail << "checksum " << std::hex << fnv1a(body) << "\n";
  return body + tail.str();
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    line_start_ = pos_;
    const std::size_t nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      line = text_.substr(pos_);
      pos_ = text_.size();
    } else {
      line = text_.substr(pos_, nl - pos_);
      pos_ = nl + 1;
    }
    return true;
  }

  std::size_t line_offset() const { return line_start_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_start_ = 0;
};

std::uint64_t parse_u64(std::string_view tok, std::size_t offset, int base = 10) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(offset, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

}  // namespace

class GraphReader {
 public:
  static GluedTreesGraph read(const std::string& bytes) {
    LineReader lines(bytes);
    std::string_view line;

    auto expect_line = [&](const char* what) {
      if (!lines.next(line)) throw ParseError(bytes.size(), std::string("missing ") + what);
      return lines.line_offset();
    };

    std::size_t off = expect_line("header");
    if (line != "gluedtrees-graph v1") throw ParseError(off, "bad header or version");

    off = expect_line("n");
    auto toks = split(line);
    if (toks.size() != 2 || toks[0] != "n") throw ParseError(off, "expected 'n <value>'");
    const int n = static_cast<int>(parse_u64(toks[1], off));

    off = expect_line("seed");
    toks = split(line);
    if (toks.size() != 2 || toks[0] != "seed") throw ParseError(off, "expected 'seed <value>'");
    const std::uint64_t graph_seed = parse_u64(toks[1], off);

    GluedTreesGraph g = GluedTreesGraph::generate(n, graph_seed);

    off = expect_line("names");
    toks = split(line);
    if (toks.size() < 2 || toks[0] != "names") throw ParseError(off, "expected 'names <0|1> [seed]'");
    const bool named = parse_u64(toks[1], off) != 0;
    std::uint64_t name_seed = 0;
    if (named) {
      if (toks.size() != 3) throw ParseError(off, "named graph missing name seed");
      name_seed = parse_u64(toks[2], off);
    }

    off = expect_line("coloring");
    toks = split(line);
    if (toks.size() < 2 || toks[0] != "coloring") throw ParseError(off, "expected 'coloring <0|1> [seed]'");
    const bool colored = parse_u64(toks[1], off) != 0;
    std::uint64_t color_seed = 0;
    if (colored) {
      if (toks.size() != 3) throw ParseError(off, "colored graph missing color seed");
      color_seed = parse_u64(toks[2], off);
    }

    if (named) g.assign_names(name_seed);
    if (colored) g.assign_coloring(color_seed);

    // The remainder is redundant with the seeds; verify it against the
    // regenerated graph so corruption is caught, not silently ignored.
    if (named) {
      off = expect_line("namelist");
      toks = split(line);
      if (toks.size() != 2 || toks[0] != "namelist") throw ParseError(off, "expected 'namelist <count>'");
      const int count = static_cast<int>(parse_u64(toks[1], off));
      if (count != g.vertex_count()) throw ParseError(off, "name count mismatch");
      for (int v = 0; v < count; ++v) {
        off = expect_line("name entry");
        if (parse_u64(split(line)[0], off) != g.names_[static_cast<std::size_t>(v)])
          throw ParseError(off, "name entry does not match seed regeneration");
      }
    }

    off = expect_line("edges");
    toks = split(line);
    if (toks.size() != 2 || toks[0] != "edges") throw ParseError(off, "expected 'edges <count>'");
    const int ecount = static_cast<int>(parse_u64(toks[1], off));
    if (ecount != g.edge_count()) throw ParseError(off, "edge count mismatch");
    for (int e = 0; e < ecount; ++e) {
      off = expect_line("edge entry");
      toks = split(line);
      if (toks.size() < 2) throw ParseError(off, "short edge entry");
      const int v = static_cast<int>(parse_u64(toks[0], off));
      const int u = static_cast<int>(parse_u64(toks[1], off));
      if (v < 0 || v >= g.vertex_count() || u < 0 || u >= g.vertex_count())
        throw ParseError(off, "edge endpoint out of range");
      int s = 0;
      const auto& slots = g.adj_[static_cast<std::size_t>(v)];
      while (s < 3 && slots[static_cast<std::size_t>(s)] != u) ++s;
      if (s == 3) throw ParseError(off, "edge not present in regenerated graph");
      if (colored) {
        if (toks.size() != 3) throw ParseError(off, "edge entry missing color");
        if (color_from_string(std::string(toks[2])) != g.edge_color(v, s))
          throw ParseError(off, "edge color does not match seed regeneration");
      }
    }

    off = expect_line("checksum");
    const std::size_t body_end = lines.line_offset();
    toks = split(line);
    if (toks.size() != 2 || toks[0] != "checksum") throw ParseError(off, "expected checksum");
    const std::uint64_t want = parse_u64(toks[1], off, 16);
    const std::uint64_t got = fnv1a(std::string_view(bytes).substr(0, body_end));
    if (want != got) throw ParseError(off, "checksum mismatch");
    return g;
  }
};

GluedTreesGraph GluedTreesGraph::deserialize(const std::string& bytes) {
  return GraphReader::read(bytes);
}

}  // namespace gluedtrees
