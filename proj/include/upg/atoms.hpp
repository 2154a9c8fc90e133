//===- atoms.hpp - Safety-constraint atoms and finite atom sets -----------===//
//
// An Atom names one safety-constraint predicate. A FactSet is a finite,
// duplicate-free set of atoms; every constraint set the analyzer handles
// (declared constraints, established facts, broken invariants) is one.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <compare>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace upg {

/// True for `[A-Za-z_][A-Za-z0-9_]*`.
bool is_identifier(std::string_view text);

class Atom {
public:
  Atom() = default;
  explicit Atom(std::string name) : name_(std::move(name)) {}

  const std::string &name() const { return name_; }

  friend bool operator==(const Atom &, const Atom &) = default;
  friend auto operator<=>(const Atom &, const Atom &) = default;

private:
  std::string name_;
};

class FactSet {
public:
  using const_iterator = std::set<Atom>::const_iterator;

  FactSet() = default;
  FactSet(std::initializer_list<const char *> names);
  explicit FactSet(const std::vector<std::string> &names);

  void insert(const Atom &atom) { atoms_.insert(atom); }
  void insert(std::string name) { atoms_.insert(Atom(std::move(name))); }
  bool erase(const Atom &atom) { return atoms_.erase(atom) != 0; }

  bool contains(const Atom &atom) const { return atoms_.count(atom) != 0; }
  bool contains(std::string_view name) const {
    return contains(Atom(std::string(name)));
  }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  const_iterator begin() const { return atoms_.begin(); }
  const_iterator end() const { return atoms_.end(); }

  FactSet united(const FactSet &other) const;
  FactSet minus(const FactSet &other) const;
  FactSet intersected(const FactSet &other) const;
  bool subset_of(const FactSet &other) const;

  /// Sorted atom names.
  std::vector<std::string> names() const;
  /// `[a, b]`
  std::string to_string() const;

  friend bool operator==(const FactSet &, const FactSet &) = default;

private:
  std::set<Atom> atoms_;
};

} // namespace upg
