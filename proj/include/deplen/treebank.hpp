#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deplen {

/// Raised when an operation's precondition is not met by its argument
/// (for example asking for a subtree yield on a non-projective tree).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a token list cannot form a dependency tree.
class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a corpus source cannot be read at all.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string form;
  int head = 0;   // 0 marks the root
  std::string deprel;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Inclusive range of 1-based token positions.
struct Span {
  int first = 0;
  int last = 0;

  [[nodiscard]] int size() const { return last - first + 1; }
  [[nodiscard]] bool contains(int pos) const { return pos >= first && pos <= last; }

  friend bool operator==(const Span&, const Span&) = default;
};

/// One parsed sentence. Construction validates the tree invariants:
/// contiguous indices 1..n, a single root, in-range heads, no cycles.
class DependencyTree {
 public:
  DependencyTree() = default;
  explicit DependencyTree(std::vector<Token> tokens, std::string id = {});

  [[nodiscard]] const std::vector<Token>& tokens() const { return tokens_; }
  [[nodiscard]] const Token& token(int pos) const { return tokens_.at(static_cast<std::size_t>(pos - 1)); }
  [[nodiscard]] int size() const { return static_cast<int>(tokens_.size()); }
  [[nodiscard]] int root_index() const { return root_; }
  [[nodiscard]] int head(int pos) const { return token(pos).head; }
  [[nodiscard]] const std::string& id() const { return id_; }

  /// Dependents of `pos` in left-to-right order; pos 0 yields the root.
  [[nodiscard]] std::vector<int> children(int pos) const;

  /// Cached at construction, see is_projective().
  [[nodiscard]] bool projective() const { return projective_; }

  friend bool operator==(const DependencyTree& a, const DependencyTree& b) {
    return a.tokens_ == b.tokens_ && a.id_ == b.id_;
  }

 private:
  std::vector<Token> tokens_;
  std::string id_;
  int root_ = 0;
  bool projective_ = true;
};

enum class CorpusFormat { conllu, tsv_minimal };

CorpusFormat parse_format(std::string_view name);
std::string_view format_name(CorpusFormat format);

struct Diagnostic {
  std::size_t line = 0;  // first line of the offending block
  std::string reason;
};

struct ParseResult {
  std::vector<DependencyTree> trees;
  std::vector<Diagnostic> diagnostics;
};

/// Reads blank-line separated sentence blocks. Malformed blocks become a
/// Diagnostic and are skipped. Multiword ranges (`3-4`) and empty nodes
/// (`5.1`) are ignored in CoNLL-U input. Sentences without a `# sent_id`
/// comment are named by their 1-based ordinal among accepted trees.
ParseResult parse_corpus(std::istream& source, CorpusFormat format);

/// Opens and parses `path`; throws IoError when the file cannot be read.
ParseResult read_corpus_file(const std::string& path, CorpusFormat format);

void write_corpus(std::ostream& out, const std::vector<DependencyTree>& trees, CorpusFormat format);

/// True iff every subtree yield is a contiguous span. Equivalent to no two
/// arcs crossing once the root is attached to an artificial position 0.
bool is_projective(const DependencyTree& tree);

/// [min, max] positions of the subtree headed by `head`, inclusive.
/// Throws ContractViolation on a non-projective tree.
Span subtree_yield(const DependencyTree& tree, int head);

/// Deprels treated as punctuation by strip_punctuation.
bool is_punctuation_deprel(std::string_view deprel);

/// Removes punctuation tokens and renumbers the rest. Dependents of a removed
/// token are reattached to its head. A punctuation root is kept.
DependencyTree strip_punctuation(const DependencyTree& tree);

}  // namespace deplen
