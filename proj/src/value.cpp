#include "value.hpp"

#include <algorithm>
#include <sstream>

namespace cise {

Value Value::integer(long long v) {
  Value x;
  x.kind = Kind::Int;
  x.i = v;
  return x;
}

Value Value::boolean(bool v) {
  Value x;
  x.kind = Kind::Bool;
  x.b = v;
  return x;
}

Value Value::pair(Value first, Value second) {
  Value x;
  x.kind = Kind::Pair;
  x.items.reserve(2);
  x.items.push_back(std::move(first));
  x.items.push_back(std::move(second));
  return x;
}

Value Value::set(std::vector<Value> elems) {
  Value x;
  x.kind = Kind::Set;
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Value& a, const Value& b) { return a == b; }),
              elems.end());
  x.items = std::move(elems);
  return x;
}

Value Value::empty_set() { return set({}); }

bool Value::contains(const Value& e) const {
  return std::binary_search(items.begin(), items.end(), e);
}

Value Value::with_added(const Value& e) const {
  if (contains(e)) return *this;
  Value x = *this;
  x.items.insert(std::upper_bound(x.items.begin(), x.items.end(), e), e);
  return x;
}

Value Value::with_removed(const Value& e) const {
  Value x = *this;
  auto it = std::lower_bound(x.items.begin(), x.items.end(), e);
  if (it != x.items.end() && *it == e) x.items.erase(it);
  return x;
}

std::string Value::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Int:
      os << i;
      break;
    case Kind::Bool:
      os << (b ? "true" : "false");
      break;
    case Kind::Pair:
      os << "(" << items[0].str() << ", " << items[1].str() << ")";
      break;
    case Kind::Set: {
      os << "{";
      for (size_t k = 0; k < items.size(); ++k) {
        if (k) os << ", ";
        os << items[k].str();
      }
      os << "}";
      break;
    }
  }
  return os.str();
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::Int:
      return a.i == b.i;
    case Value::Kind::Bool:
      return a.b == b.b;
    case Value::Kind::Pair:
    case Value::Kind::Set:
      return a.items == b.items;
  }
  return false;
}

bool operator<(const Value& a, const Value& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  switch (a.kind) {
    case Value::Kind::Int:
      return a.i < b.i;
    case Value::Kind::Bool:
      return a.b < b.b;
    case Value::Kind::Pair:
    case Value::Kind::Set:
      return std::lexicographical_compare(a.items.begin(), a.items.end(),
                                          b.items.begin(), b.items.end());
  }
  return false;
}

void Env::bind(const std::string& name, Value v) {
  vars_.emplace_back(name, std::move(v));
}

void Env::pop() { vars_.pop_back(); }

const Value* Env::lookup(const std::string& name) const {
  for (auto it = vars_.rbegin(); it != vars_.rend(); ++it)
    if (it->first == name) return &it->second;
  return nullptr;
}

}  // namespace cise
