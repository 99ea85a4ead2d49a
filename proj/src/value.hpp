#pragma once

#include <string>
#include <vector>

#include "ast.hpp"

namespace cise {

// Immutable runtime value: integer, boolean, pair, or canonical finite set.
// Sets keep their elements sorted and unique, so structural equality is
// extensional equality.
struct Value {
  enum class Kind { Int, Bool, Pair, Set };

  Kind kind = Kind::Int;
  long long i = 0;
  bool b = false;
  std::vector<Value> items;  // Pair: [first, second]; Set: sorted unique

  static Value integer(long long v);
  static Value boolean(bool v);
  static Value pair(Value first, Value second);
  static Value set(std::vector<Value> elems);  // canonicalizes
  static Value empty_set();

  bool is_empty_set() const { return kind == Kind::Set && items.empty(); }
  bool contains(const Value& e) const;
  Value with_added(const Value& e) const;
  Value with_removed(const Value& e) const;

  std::string str() const;
};

bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }
bool operator<(const Value& a, const Value& b);  // total order; used for canon

// State value: one Value per StateDecl field, in declaration order.
using StateValue = std::vector<Value>;

// Variable environment with lexical scoping (later bindings shadow earlier).
class Env {
 public:
  void bind(const std::string& name, Value v);
  void pop();
  const Value* lookup(const std::string& name) const;
  size_t size() const { return vars_.size(); }

 private:
  std::vector<std::pair<std::string, Value>> vars_;
};

}  // namespace cise
