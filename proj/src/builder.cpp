#include "qfa/builder.hpp"

namespace qfa {

PermBuilder::PermBuilder(Kind kind, int heads, std::vector<std::string> alphabet)
    : heads_(heads) {
  m_.kind = kind;
  m_.heads = heads;
  m_.alphabet = std::move(alphabet);
}

int PermBuilder::state(const std::string& name, char cls, std::vector<int> indir) {
  int id = static_cast<int>(m_.states.size());
  m_.states.push_back(name);
  if (cls == 'a') m_.accepting.insert(id);
  if (cls == 'r') m_.rejecting.insert(id);
  indirs_.push_back(std::move(indir));
  return id;
}

void PermBuilder::initial(const std::string& name) { m_.initial = m_.state_id(name); }

void PermBuilder::single(const std::vector<std::string>& scan, const std::string& from,
                         const std::string& to) {
  Block b;
  b.sources = {m_.state_id(from)};
  b.targets = {m_.state_id(to)};
  b.weights = {{AmpExpr::rational(Rat(1))}};
  add_block(scan, std::move(b));
}

void PermBuilder::block(const std::vector<std::string>& scan, const std::vector<std::string>& from,
                        const std::vector<std::string>& to,
                        const std::vector<std::vector<AmpExpr>>& weights) {
  Block b;
  for (const auto& s : from) b.sources.push_back(m_.state_id(s));
  for (const auto& t : to) b.targets.push_back(m_.state_id(t));
  b.weights = weights;
  add_block(scan, std::move(b));
}

void PermBuilder::add_block(const std::vector<std::string>& scan, Block b) {
  std::vector<int> key;
  for (const auto& s : scan) {
    int id = m_.symbol_id(s);
    if (id < 0) throw Error("PermBuilder: unknown symbol " + s);
    key.push_back(id);
  }
  for (int s : b.sources)
    if (s < 0) throw Error("PermBuilder: unknown source state");
  for (int t : b.targets)
    if (t < 0) throw Error("PermBuilder: unknown target state");
  sigma_[key].push_back(std::move(b));
}

void PermBuilder::enumerate_tuples(int h, std::vector<int>& cur,
                                   std::vector<std::vector<int>>* out) {
  if (h == heads_) {
    out->push_back(cur);
    return;
  }
  for (int s = 0; s < m_.num_symbols(); ++s) {
    cur[h] = s;
    enumerate_tuples(h + 1, cur, out);
  }
}

MachineSpec PermBuilder::finish() {
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur(heads_, 0);
  enumerate_tuples(0, cur, &tuples);
  for (const auto& scan : tuples) {
    auto& blocks = sigma_[scan];
    std::vector<bool> src_used(m_.states.size(), false), tgt_used(m_.states.size(), false);
    for (const auto& b : blocks) {
      for (int s : b.sources) {
        if (src_used[s]) throw Error("PermBuilder: duplicate source in sigma map");
        src_used[s] = true;
      }
      for (int t : b.targets) {
        if (tgt_used[t]) throw Error("PermBuilder: duplicate target in sigma map");
        tgt_used[t] = true;
      }
    }
    std::vector<int> free_src, free_tgt;
    for (size_t i = 0; i < m_.states.size(); ++i) {
      if (!src_used[i]) free_src.push_back(static_cast<int>(i));
      if (!tgt_used[i]) free_tgt.push_back(static_cast<int>(i));
    }
    for (size_t i = 0; i < free_src.size(); ++i) {
      Block b;
      b.sources = {free_src[i]};
      b.targets = {free_tgt[i]};
      b.weights = {{AmpExpr::rational(Rat(1))}};
      blocks.push_back(std::move(b));
    }
    for (const auto& b : blocks) {
      for (size_t j = 0; j < b.sources.size(); ++j) {
        for (size_t i = 0; i < b.targets.size(); ++i) {
          const AmpExpr& w = b.weights[i][j];
          if (w.exact_representable() && w.eval().is_zero()) continue;
          Transition tr;
          tr.from = b.sources[j];
          tr.to = b.targets[i];
          tr.scan = scan;
          tr.move = indirs_[b.targets[i]];
          tr.weight = w;
          m_.transitions.push_back(std::move(tr));
        }
      }
    }
  }
  m_.reindex();
  return m_;
}

}  // namespace qfa
