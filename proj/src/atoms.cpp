#include "upg/atoms.hpp"

#include <algorithm>
#include <cctype>

namespace upg {

bool is_identifier(std::string_view text) {
  if (text.empty())
    return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!std::isalpha(head) && head != '_')
    return false;
  return std::all_of(text.begin() + 1, text.end(), [](char ch) {
    auto c = static_cast<unsigned char>(ch);
    return std::isalnum(c) || c == '_';
  });
}

FactSet::FactSet(std::initializer_list<const char *> names) {
  for (const char *name : names)
    atoms_.insert(Atom(name));
}

FactSet::FactSet(const std::vector<std::string> &names) {
  for (const auto &name : names)
    atoms_.insert(Atom(name));
}

FactSet FactSet::united(const FactSet &other) const {
  FactSet out = *this;
  out.atoms_.insert(other.atoms_.begin(), other.atoms_.end());
  return out;
}

FactSet FactSet::minus(const FactSet &other) const {
  FactSet out;
  std::set_difference(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                      other.atoms_.end(),
                      std::inserter(out.atoms_, out.atoms_.end()));
  return out;
}

FactSet FactSet::intersected(const FactSet &other) const {
  FactSet out;
  std::set_intersection(atoms_.begin(), atoms_.end(), other.atoms_.begin(),
                        other.atoms_.end(),
                        std::inserter(out.atoms_, out.atoms_.end()));
  return out;
}

bool FactSet::subset_of(const FactSet &other) const {
  return std::includes(other.atoms_.begin(), other.atoms_.end(),
                       atoms_.begin(), atoms_.end());
}

std::vector<std::string> FactSet::names() const {
  std::vector<std::string> out;
  out.reserve(atoms_.size());
  for (const auto &atom : atoms_)
    out.push_back(atom.name());
  return out;
}

std::string FactSet::to_string() const {
  std::string out = "[";
  bool first = true;
  for (const auto &atom : atoms_) {
    if (!first)
      out += ", ";
    out += atom.name();
    first = false;
  }
  out += "]";
  return out;
}

} // namespace upg
