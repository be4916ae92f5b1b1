#include "plr/tree.hpp"

#include <cctype>
#include <stdexcept>

namespace plr {

int Tree::size() const {
  if (leaf()) return 1;
  int n = 0;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

std::string strip_suffix(const std::string& label) {
  if (label.empty() || label.front() == '-') return label;  // -NONE-, -LRB-
  auto cut = label.find_first_of("-=");
  return cut == std::string::npos ? label : label.substr(0, cut);
}

Tree make_leaf(const std::string& atom) {
  Tree t;
  auto us = atom.rfind('_');
  if (us != std::string::npos && us > 0 && us + 1 < atom.size()) {
    t.word = atom.substr(0, us);
    t.label = atom.substr(us + 1);
  } else {
    t.word = atom;
    t.label = atom;
  }
  return t;
}

class Reader {
 public:
  Reader(std::string_view text, bool labelled) : text_(text), labelled_(labelled) {}

  Tree read() {
    skip();
    if (peek() != '(') fail("expected '('");
    Tree t = node();
    skip();
    if (pos_ != text_.size()) fail("trailing text after tree");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("tree: " + msg + " at offset " + std::to_string(pos_));
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  std::string atom() {
    std::size_t b = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  Tree node() {
    ++pos_;  // '('
    Tree t;
    skip();
    if (labelled_ && peek() != '(' && peek() != ')') t.label = strip_suffix(atom());
    bool empty_node = labelled_ && t.label == "-NONE-";
    for (;;) {
      skip();
      char c = peek();
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '\0') fail("unbalanced parentheses");
      if (c == '(') {
        Tree child = node();
        if (child.label != "-NONE-" && !(child.children.empty() && child.word.empty()))
          t.children.push_back(std::move(child));
      } else {
        t.children.push_back(make_leaf(atom()));
      }
    }
    if (empty_node) {
      t.children.clear();
      t.label = "-NONE-";
      return t;
    }
    if (t.children.empty()) {
      if (!labelled_) fail("empty constituent");
      // A labelled node with no surviving daughters vanishes.
      return Tree{};
    }
    return t;
  }

  std::string_view text_;
  bool labelled_;
  std::size_t pos_ = 0;
};

}  // namespace

Tree read_tree(std::string_view text, bool labelled) {
  Tree t = Reader(text, labelled).read();
  if (t.children.empty()) throw std::invalid_argument("tree has no words");
  return t;
}

std::vector<Tree> read_treebank(std::string_view text, bool labelled) {
  std::vector<Tree> out;
  std::size_t b = 0;
  while (b <= text.size()) {
    auto e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    std::string_view line = text.substr(b, e - b);
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i < line.size() && line[i] != '#') out.push_back(read_tree(line, labelled));
    b = e + 1;
  }
  return out;
}

std::string to_string(const Tree& tree) {
  if (tree.leaf()) return tree.word == tree.label || tree.word.empty() ? tree.label : tree.word + "_" + tree.label;
  std::string s = "(";
  s += tree.label;
  for (const auto& c : tree.children) {
    if (s.size() > 1) s += ' ';
    s += to_string(c);
  }
  return s + ")";
}

std::vector<const Tree*> leaves(const Tree& tree) {
  std::vector<const Tree*> out;
  auto walk = [&](auto&& self, const Tree& t) -> void {
    if (t.leaf()) {
      out.push_back(&t);
      return;
    }
    for (const auto& c : t.children) self(self, c);
  };
  walk(walk, tree);
  return out;
}

SentenceLattice tree_lattice(const Tree& tree) {
  SentenceLattice s;
  for (const Tree* l : leaves(tree)) s.tokens.push_back({l->word, {{l->label, 1.0}}});
  return s;
}

Tree display_tree(const DerivationTree& d, const CFBackbone& backbone, const SentenceLattice* lattice) {
  Tree t;
  t.label = backbone.name(d.symbol);
  if (d.leaf()) {
    t.word = lattice && d.start < lattice->size() ? lattice->tokens[static_cast<std::size_t>(d.start)].word : t.label;
    return t;
  }
  for (const auto& c : d.children) {
    if (!c.leaf() && backbone.auxiliary[static_cast<std::size_t>(c.symbol)]) {
      Tree spliced = display_tree(c, backbone, lattice);
      for (auto& g : spliced.children) t.children.push_back(std::move(g));
    } else {
      t.children.push_back(display_tree(c, backbone, lattice));
    }
  }
  return t;
}

}  // namespace plr
