#pragma once
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdgl/linalg.hpp"

namespace cdgl {

struct Generator {
  std::string name;
  int degree = 0;
  bool operator==(const Generator&) const = default;
};

// A word is a string of generator indices; the empty word is the unit.
using Word = std::string;
using Tensor = std::map<Word, Rat>;
// Lie elements are stored through their image in the tensor algebra.
using LieElement = Tensor;

void add_to(Tensor& a, const Tensor& b, const Rat& c = 1);
Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a);
Tensor operator*(const Rat& c, const Tensor& a);
Tensor truncate(const Tensor& t, int cap);
Tensor length_part(const Tensor& t, int len);
Tensor lengths_upto(const Tensor& t, int len);
int min_length(const Tensor& t);  // -1 for zero
int max_length(const Tensor& t);  // -1 for zero
inline Word word1(int g) { return Word(1, static_cast<char>(g)); }

class FreeLie {
 public:
  FreeLie(std::vector<Generator> gens, int cap);

  const std::vector<Generator>& gens() const { return gens_; }
  int ngens() const { return static_cast<int>(gens_.size()); }
  int cap() const { return cap_; }
  int index_of(const std::string& name) const;
  int gen_degree(int i) const { return gens_[i].degree; }
  int word_degree(const Word& w) const;
  // Degree of a nonzero homogeneous element; nullopt for zero; throws Degree otherwise.
  std::optional<int> degree_of(const Tensor& t) const;
  bool is_homogeneous(const Tensor& t, int degree) const;

  Tensor gen(int i) const;
  Tensor one() const;
  Tensor mul(const Tensor& a, const Tensor& b) const;
  Tensor bracket(const Tensor& a, const Tensor& b) const;
  Tensor ad_pow(const Tensor& x, const Tensor& y, int k) const;

  // Graded left-normed bracketing of each word.
  Tensor dynkin(const Tensor& t) const;
  bool dynkin_is_lie(const Tensor& t) const;
  bool is_lie(const Tensor& t) const;

  struct Block {
    std::vector<Tensor> elems;
    std::vector<std::string> labels;
    Echelon<Word> ech;
  };
  const Block& block(int degree, int length) const;
  std::vector<Tensor> lie_basis(int degree, int length) const;
  int dim(int degree) const;
  std::vector<Tensor> basis(int degree) const;
  std::vector<std::string> basis_labels(int degree) const;
  // Coordinates in basis(degree); throws NotInSpan for non-Lie input.
  SparseVec coordinates(const Tensor& e, int degree) const;
  Tensor from_coordinates(const SparseVec& v, int degree) const;
  // Degree range [lo, hi] in which nonzero Lie elements of length <= cap can live.
  std::pair<int, int> degree_span() const;

  std::string format(const Tensor& e) const;

 private:
  std::vector<Generator> gens_;
  int cap_;
  int min_deg_ = 0, max_deg_ = 0;
  mutable std::map<std::pair<int, int>, Block> blocks_;
  mutable std::map<Word, Tensor> dynkin_cache_;
};

}  // namespace cdgl
