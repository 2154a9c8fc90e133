#include "upg/graph.hpp"
#include "upg/constraints.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace upg {

std::vector<Path> StructGroup::instance_methods() const {
  std::vector<Path> out(dynamic_methods.begin(), dynamic_methods.end());
  if (destructor)
    out.push_back(*destructor);
  std::sort(out.begin(), out.end());
  return out;
}

const UpgNode *Upg::find_node(std::string_view path) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), path,
      [](const UpgNode &n, std::string_view p) { return n.function < p; });
  if (it == nodes.end() || it->function != path)
    return nullptr;
  return &*it;
}

std::set<Path> unsafe_callees(const CrateModel &model, const FunctionDecl &f) {
  std::set<Path> out;
  for (const auto &call : f.calls) {
    const FunctionDecl *callee = model.find_function(call.callee);
    if (callee && callee->is_unsafe())
      out.insert(callee->path);
  }
  return out;
}

std::set<Path> unsafe_callees(const CrateModel &model, std::string_view f) {
  const FunctionDecl *decl = model.find_function(f);
  if (!decl)
    throw std::out_of_range("unresolved function '" + std::string(f) + "'");
  return unsafe_callees(model, *decl);
}

StructGroup make_struct_group(const CrateModel &model,
                              std::string_view struct_path) {
  StructGroup group;
  group.struct_path = std::string(struct_path);
  for (const auto *member : model.members_of(struct_path)) {
    switch (member->kind()) {
    case FunctionKind::Constructor:
      group.constructors.insert(member->path);
      break;
    case FunctionKind::StaticFn:
      group.static_methods.insert(member->path);
      break;
    case FunctionKind::DynamicMethod:
      group.dynamic_methods.insert(member->path);
      if (!bs_of_method(*member).empty())
        group.disruptive.insert(member->path);
      break;
    case FunctionKind::Destructor:
      if (!group.destructor)
        group.destructor = member->path;
      if (!bs_of_method(*member).empty())
        group.disruptive.insert(member->path);
      break;
    }
  }
  return group;
}

namespace {

/// Bodied functions that reach an unsafe callee through crate-local calls.
std::set<Path> reaching_set(const CrateModel &model) {
  std::map<Path, std::set<Path>> callers_of;
  std::vector<Path> work;
  std::set<Path> reach;
  for (const auto *f : model.functions()) {
    for (const auto &call : f->calls) {
      const FunctionDecl *callee = model.find_function(call.callee);
      if (!callee)
        continue;
      callers_of[callee->path].insert(f->path);
      if (callee->is_unsafe() && reach.insert(f->path).second)
        work.push_back(f->path);
    }
  }
  while (!work.empty()) {
    Path p = std::move(work.back());
    work.pop_back();
    for (const auto &caller : callers_of[p])
      if (reach.insert(caller).second)
        work.push_back(caller);
  }
  return reach;
}

} // namespace

Upg build_upg(const CrateModel &model) {
  Upg upg;
  std::set<Path> reach = reaching_set(model);
  std::set<Path> node_paths;
  std::set<UpgEdge> edges;

  for (const auto *f : model.functions()) {
    if (f->is_unsafe() || reach.count(f->path))
      node_paths.insert(f->path);
    for (const auto &call : f->calls) {
      const FunctionDecl *callee = model.find_function(call.callee);
      if (!callee || !(callee->is_unsafe() || reach.count(callee->path)))
        continue;
      edges.insert({f->path, callee->path, callee->is_unsafe()});
      node_paths.insert(f->path);
      node_paths.insert(callee->path);
    }
  }

  for (const auto *s : model.structs()) {
    StructGroup group = make_struct_group(model, s->name);
    std::vector<Path> members(group.constructors.begin(),
                              group.constructors.end());
    members.insert(members.end(), group.static_methods.begin(),
                   group.static_methods.end());
    for (const auto &m : group.instance_methods())
      members.push_back(m);
    bool qualifies = std::any_of(members.begin(), members.end(),
                                 [&](const Path &p) {
                                   return !unsafe_callees(model, p).empty();
                                 });
    if (!qualifies)
      continue;
    node_paths.insert(members.begin(), members.end());
    upg.struct_groups.push_back(std::move(group));
  }

  for (const auto &path : node_paths) {
    const FunctionDecl *f = model.find_function(path);
    upg.nodes.push_back({path, f->kind(), f->unsafety, f->external});
  }
  upg.edges.assign(edges.begin(), edges.end());
  return upg;
}

const char *to_string(SubgraphKind kind) {
  switch (kind) {
  case SubgraphKind::UnsafeNode:
    return "unsafe_node";
  case SubgraphKind::CallWithUnsafeCallee:
    return "call_with_unsafe_callee";
  case SubgraphKind::StructAudit:
    return "struct_audit";
  }
  return "unsafe_node";
}

std::vector<Subgraph> segment(const Upg &upg) {
  std::vector<Subgraph> out;
  for (const auto &node : upg.nodes) {
    if (node.unsafety != Unsafety::Unsafe)
      continue;
    Subgraph sg;
    sg.kind = SubgraphKind::UnsafeNode;
    sg.focus = node.function;
    sg.id = std::string(to_string(sg.kind)) + ":" + node.function;
    sg.nodes.insert(node.function);
    out.push_back(std::move(sg));
  }

  std::set<Path> audited_methods;
  for (const auto &group : upg.struct_groups) {
    for (const auto &m : group.instance_methods()) {
      bool calls_unsafe = std::any_of(
          upg.edges.begin(), upg.edges.end(), [&](const UpgEdge &e) {
            return e.caller == m && e.callee_unsafe;
          });
      if (!calls_unsafe)
        continue;
      audited_methods.insert(m);
      Subgraph sg;
      sg.kind = SubgraphKind::StructAudit;
      sg.focus = m;
      sg.id = std::string(to_string(sg.kind)) + ":" + m;
      sg.nodes.insert(m);
      sg.nodes.insert(group.constructors.begin(), group.constructors.end());
      sg.nodes.insert(group.disruptive.begin(), group.disruptive.end());
      for (const auto &e : upg.edges)
        if (e.caller == m)
          sg.edges.insert(e);
      out.push_back(std::move(sg));
    }
  }

  for (const auto &e : upg.edges) {
    if (audited_methods.count(e.caller))
      continue;
    Subgraph sg;
    sg.kind = SubgraphKind::CallWithUnsafeCallee;
    sg.focus = e.caller;
    sg.id = std::string(to_string(sg.kind)) + ":" + e.caller + "->" + e.callee;
    sg.nodes = {e.caller, e.callee};
    sg.edges.insert(e);
    out.push_back(std::move(sg));
  }

  std::sort(out.begin(), out.end(), [](const Subgraph &a, const Subgraph &b) {
    return std::tuple(a.focus, std::string_view(to_string(a.kind)), a.id) <
           std::tuple(b.focus, std::string_view(to_string(b.kind)), b.id);
  });
  return out;
}

namespace {

std::string cluster_name(const Path &path) {
  std::string out = "cluster_";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path.compare(i, 2, "::") == 0) {
      out += "__";
      ++i;
    } else {
      out += path[i];
    }
  }
  return out;
}

std::string node_line(const UpgNode &node, const std::set<Path> &disruptive) {
  std::string line = "\"" + node.function + "\"";
  std::vector<std::string> attrs;
  if (node.unsafety == Unsafety::Unsafe)
    attrs.push_back("shape=box");
  if (disruptive.count(node.function))
    attrs.push_back("style=dashed");
  if (!attrs.empty()) {
    line += " [";
    for (std::size_t i = 0; i < attrs.size(); ++i)
      line += (i ? ", " : "") + attrs[i];
    line += "]";
  }
  return line + ";\n";
}

} // namespace

std::string export_dot(const Upg &upg) {
  std::ostringstream out;
  out << "digraph upg {\n";
  std::set<Path> clustered;
  for (const auto &group : upg.struct_groups) {
    std::set<Path> members = group.constructors;
    members.insert(group.static_methods.begin(), group.static_methods.end());
    members.insert(group.dynamic_methods.begin(), group.dynamic_methods.end());
    if (group.destructor)
      members.insert(*group.destructor);
    out << "  subgraph " << cluster_name(group.struct_path) << " {\n";
    out << "    label=\"" << group.struct_path << "\";\n";
    for (const auto &node : upg.nodes) {
      if (!members.count(node.function))
        continue;
      clustered.insert(node.function);
      out << "    " << node_line(node, group.disruptive);
    }
    out << "  }\n";
  }
  for (const auto &node : upg.nodes)
    if (!clustered.count(node.function))
      out << "  " << node_line(node, {});
  for (const auto &e : upg.edges) {
    out << "  \"" << e.caller << "\" -> \"" << e.callee << "\"";
    if (!e.callee_unsafe)
      out << " [style=dotted]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

Json to_json(const Upg &upg) {
  Json nodes = Json::array();
  for (const auto &n : upg.nodes)
    nodes.push_back({{"function", n.function},
                     {"kind", to_string(n.kind)},
                     {"unsafety", to_string(n.unsafety)},
                     {"external", n.external}});
  Json edges = Json::array();
  for (const auto &e : upg.edges)
    edges.push_back({{"caller", e.caller},
                     {"callee", e.callee},
                     {"callee_unsafe", e.callee_unsafe}});
  Json groups = Json::array();
  for (const auto &g : upg.struct_groups) {
    Json j;
    j["struct"] = g.struct_path;
    j["constructors"] = g.constructors;
    j["static_methods"] = g.static_methods;
    j["dynamic_methods"] = g.dynamic_methods;
    j["destructor"] = g.destructor ? Json(*g.destructor) : Json(nullptr);
    j["disruptive"] = g.disruptive;
    groups.push_back(std::move(j));
  }
  return {{"nodes", nodes}, {"edges", edges}, {"struct_groups", groups}};
}

Json to_json(const Subgraph &sg) {
  Json edges = Json::array();
  for (const auto &e : sg.edges)
    edges.push_back({{"caller", e.caller},
                     {"callee", e.callee},
                     {"callee_unsafe", e.callee_unsafe}});
  return {{"id", sg.id},
          {"kind", to_string(sg.kind)},
          {"focus", sg.focus},
          {"nodes", sg.nodes},
          {"edges", edges}};
}

Json to_json(const std::vector<Subgraph> &subgraphs) {
  Json out = Json::array();
  for (const auto &sg : subgraphs)
    out.push_back(to_json(sg));
  return out;
}

} // namespace upg
