#include "deplen/treebank.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace deplen {

namespace {

struct Extent {
  int min = 0;
  int max = 0;
  int size = 0;
};

// Subtree extents for every position, computed by pushing each token up its
// head chain. Assumes a validated (acyclic) head structure.
std::vector<Extent> subtree_extents(const std::vector<Token>& tokens) {
  const int n = static_cast<int>(tokens.size());
  std::vector<Extent> ext(static_cast<std::size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) ext[i] = {i, i, 0};
  for (int t = 1; t <= n; ++t) {
    for (int a = t; a != 0; a = tokens[static_cast<std::size_t>(a - 1)].head) {
      auto& e = ext[static_cast<std::size_t>(a)];
      e.min = std::min(e.min, t);
      e.max = std::max(e.max, t);
      ++e.size;
    }
  }
  return ext;
}

bool extents_contiguous(const std::vector<Extent>& ext) {
  for (std::size_t i = 1; i < ext.size(); ++i) {
    if (ext[i].max - ext[i].min + 1 != ext[i].size) return false;
  }
  return true;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool parse_int(std::string_view text, int& value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

class BlockReader {
 public:
  explicit BlockReader(CorpusFormat format) : format_(format) {}

  void line(std::string_view text, std::size_t line_no) {
    if (start_line_ == 0) start_line_ = line_no;
    if (!error_.empty()) return;
    if (text.starts_with('#')) {
      auto body = trim(text.substr(1));
      if (body.starts_with("sent_id")) {
        auto eq = body.find('=');
        if (eq != std::string_view::npos) id_ = std::string(trim(body.substr(eq + 1)));
      }
      return;
    }
    auto cols = split_tabs(text);
    const std::size_t expected = format_ == CorpusFormat::conllu ? 10 : 4;
    if (cols.size() != expected) {
      fail(line_no, "expected " + std::to_string(expected) + " columns, found " + std::to_string(cols.size()));
      return;
    }
    if (format_ == CorpusFormat::conllu &&
        (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos)) {
      return;
    }
    Token tok;
    const auto head_col = format_ == CorpusFormat::conllu ? 6 : 2;
    const auto rel_col = format_ == CorpusFormat::conllu ? 7 : 3;
    if (!parse_int(cols[0], tok.index)) {
      fail(line_no, "bad token index '" + std::string(cols[0]) + "'");
      return;
    }
    if (!parse_int(cols[head_col], tok.head)) {
      fail(line_no, "bad head '" + std::string(cols[head_col]) + "'");
      return;
    }
    tok.form = std::string(cols[1]);
    tok.deprel = std::string(cols[rel_col]);
    tokens_.push_back(std::move(tok));
  }

  [[nodiscard]] bool empty() const { return start_line_ == 0; }

  void finish(ParseResult& result) {
    if (empty()) return;
    if (!error_.empty()) {
      result.diagnostics.push_back({error_line_, error_});
    } else if (tokens_.empty()) {
      // comment-only block
    } else {
      auto id = id_.empty() ? std::to_string(result.trees.size() + 1) : id_;
      try {
        result.trees.emplace_back(std::move(tokens_), std::move(id));
      } catch (const TreeError& e) {
        result.diagnostics.push_back({start_line_, e.what()});
      }
    }
    *this = BlockReader(format_);
  }

 private:
  void fail(std::size_t line_no, std::string reason) {
    error_line_ = line_no;
    error_ = std::move(reason);
  }

  CorpusFormat format_;
  std::vector<Token> tokens_;
  std::string id_;
  std::size_t start_line_ = 0;
  std::size_t error_line_ = 0;
  std::string error_;
};

}  // namespace

DependencyTree::DependencyTree(std::vector<Token> tokens, std::string id)
    : tokens_(std::move(tokens)), id_(std::move(id)) {
  const int n = size();
  if (n == 0) throw TreeError("empty sentence");
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const Token& t = tokens_[static_cast<std::size_t>(i - 1)];
    if (t.index != i) throw TreeError("non-contiguous token index at position " + std::to_string(i));
    if (t.head == t.index) throw TreeError("self-loop at token " + std::to_string(i));
    if (t.head < 0 || t.head > n) throw TreeError("head out of range at token " + std::to_string(i));
    if (t.head == 0) {
      ++roots;
      root_ = i;
    }
  }
  if (roots == 0) throw TreeError("no root");
  if (roots > 1) throw TreeError("multiple roots");
  // Every head chain must reach the root within n steps.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) throw TreeError("cycle through token " + std::to_string(i));
      cur = tokens_[static_cast<std::size_t>(cur - 1)].head;
    }
  }
  projective_ = extents_contiguous(subtree_extents(tokens_));
}

std::vector<int> DependencyTree::children(int pos) const {
  std::vector<int> out;
  for (const auto& t : tokens_) {
    if (t.head == pos) out.push_back(t.index);
  }
  return out;
}

CorpusFormat parse_format(std::string_view name) {
  if (name == "conllu") return CorpusFormat::conllu;
  if (name == "tsv-minimal" || name == "tsv") return CorpusFormat::tsv_minimal;
  throw std::invalid_argument("unknown corpus format '" + std::string(name) + "'");
}

std::string_view format_name(CorpusFormat format) {
  return format == CorpusFormat::conllu ? "conllu" : "tsv-minimal";
}

ParseResult parse_corpus(std::istream& source, CorpusFormat format) {
  ParseResult result;
  BlockReader block(format);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(source, line)) {
    ++line_no;
    std::string_view view = line;
    if (view.ends_with('\r')) view.remove_suffix(1);
    if (is_blank(view)) {
      block.finish(result);
      continue;
    }
    block.line(view, line_no);
  }
  if (source.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  block.finish(result);
  return result;
}

ParseResult read_corpus_file(const std::string& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus '" + path + "'");
  return parse_corpus(in, format);
}

void write_corpus(std::ostream& out, const std::vector<DependencyTree>& trees, CorpusFormat format) {
  for (const auto& tree : trees) {
    if (!tree.id().empty()) out << "# sent_id = " << tree.id() << '\n';
    for (const auto& t : tree.tokens()) {
      if (format == CorpusFormat::conllu) {
        out << t.index << '\t' << t.form << "\t_\t_\t_\t_\t" << t.head << '\t' << t.deprel << "\t_\t_\n";
      } else {
        out << t.index << '\t' << t.form << '\t' << t.head << '\t' << t.deprel << '\n';
      }
    }
    out << '\n';
  }
}

bool is_projective(const DependencyTree& tree) {
  return extents_contiguous(subtree_extents(tree.tokens()));
}

Span subtree_yield(const DependencyTree& tree, int head) {
  if (!tree.projective()) throw ContractViolation("subtree_yield requires a projective tree");
  if (head < 1 || head > tree.size()) throw std::out_of_range("token position out of range");
  const auto ext = subtree_extents(tree.tokens());
  return {ext[static_cast<std::size_t>(head)].min, ext[static_cast<std::size_t>(head)].max};
}

bool is_punctuation_deprel(std::string_view deprel) {
  return deprel == "punct" || deprel == "rsym" || deprel == "PUNCT";
}

DependencyTree strip_punctuation(const DependencyTree& tree) {
  const int n = tree.size();
  std::vector<bool> drop(static_cast<std::size_t>(n) + 1, false);
  for (const auto& t : tree.tokens()) {
    drop[static_cast<std::size_t>(t.index)] = t.head != 0 && is_punctuation_deprel(t.deprel);
  }
  std::vector<int> new_index(static_cast<std::size_t>(n) + 1, 0);
  int next = 0;
  for (int i = 1; i <= n; ++i) {
    if (!drop[static_cast<std::size_t>(i)]) new_index[static_cast<std::size_t>(i)] = ++next;
  }
  std::vector<Token> kept;
  kept.reserve(static_cast<std::size_t>(next));
  for (const auto& t : tree.tokens()) {
    if (drop[static_cast<std::size_t>(t.index)]) continue;
    int h = t.head;
    while (h != 0 && drop[static_cast<std::size_t>(h)]) h = tree.head(h);
    kept.push_back({new_index[static_cast<std::size_t>(t.index)], t.form, new_index[static_cast<std::size_t>(h)], t.deprel});
  }
  return DependencyTree(std::move(kept), tree.id());
}

}  // namespace deplen
