#include "stratcv/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stratcv/csv.hpp"
#include "stratcv/datagen.hpp"

namespace stratcv {

void TrainConfig::validate() const {
  if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("eta must lie in (0, 1]");
  if (!(base_score > 0.0 && base_score < 1.0)) {
    throw InvalidArgument("base_score must lie in (0, 1)");
  }
  if (!(reg_lambda >= 0.0)) throw InvalidArgument("reg_lambda must be >= 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be >= 0");
  if (!(min_child_weight >= 0.0)) throw InvalidArgument("min_child_weight must be >= 0");
}

double Tree::value(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                      : n.right);
  }
  return nodes[i].weight;
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t Tree::num_leaves() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

GradPair logistic_grad_hess(double margin, int y) {
  const double p = sigmoid(margin);
  return {p - static_cast<double>(y), p * (1.0 - p)};
}

double split_gain(double g_left, double h_left, double g_right, double h_right,
                  double reg_lambda, double gamma) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + reg_lambda) +
                g_right * g_right / (h_right + reg_lambda) - g * g / (h + reg_lambda)) -
         gamma;
}

double leaf_weight(double g_sum, double h_sum, double reg_lambda) {
  return -g_sum / (h_sum + reg_lambda);
}

SortedColumns::SortedColumns(const FeatureMatrix& x)
    : rows_(x.rows()), cols_(x.cols()), entries_(x.rows() * x.cols()) {
  for (std::size_t f = 0; f < cols_; ++f) {
    Entry* col = entries_.data() + f * rows_;
    for (std::size_t r = 0; r < rows_; ++r) col[r] = {x(r, f), static_cast<std::uint32_t>(r)};
    std::sort(col, col + rows_, [](const Entry& a, const Entry& b) {
      return a.value < b.value || (a.value == b.value && a.row < b.row);
    });
  }
}

namespace {

struct NodeSums {
  double g = 0.0;
  double h = 0.0;
};

constexpr double kTieTolerance = 1e-12;

// Threshold strictly above lo and at most hi, so "x < t" sends lo left and
// hi right even when the two are adjacent doubles.
double midpoint(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  return mid > lo && mid <= hi ? mid : hi;
}

// Rows of every open node, kept sorted per feature in contiguous segments
// with their gradients gathered alongside. A split stable-partitions each
// feature's segment into left then right, so children stay sorted and the
// split scan runs over contiguous memory with sums held in registers.
class TreeGrower {
 public:
  explicit TreeGrower(const SortedColumns& sorted)
      : sorted_(sorted), n_(sorted.rows()), d_(sorted.cols()),
        cur_(n_ * d_), next_(n_ * d_), spill_(n_), goes_left_(n_) {}

  // Only rows with in_root[row] != 0 enter the root; empty span means all.
  Tree grow(std::span<const GradPair> gh, const TrainConfig& config,
            std::span<const char> in_root = {}) {
    // The root reads the presorted columns in place unless it is filtered.
    const Entry* base = sorted_.column(0).data();
    std::size_t root_size = n_;
    if (!in_root.empty()) {
      for (std::size_t f = 0; f < d_; ++f) {
        Entry* out = cur_.data() + f * n_;
        root_size = 0;
        for (const auto& e : sorted_.column(f)) {
          if (in_root[e.row]) out[root_size++] = e;
        }
      }
      base = cur_.data();
    }

    Tree tree;
    tree.nodes.emplace_back();
    open_.assign(1, {0, root_size, sum(gh, base, 0, root_size), 0});

    for (std::size_t depth = 0; depth < config.max_depth && !open_.empty(); ++depth) {
      // Children of the last level are leaves and only need their sums.
      const bool last = depth + 1 == config.max_depth;
      children_.clear();
      for (const Segment& seg : open_) {
        const auto split = scan(gh, base, seg, config);
        if (!split) {
          tree.nodes[seg.node].weight = leaf_weight(seg.total.g, seg.total.h, config.reg_lambda);
          continue;
        }
        const auto left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[seg.node];
        node.feature = static_cast<int>(split->feature);
        node.threshold = split->threshold;
        node.gain = split->gain;
        node.left = left;
        node.right = left + 1;

        const std::size_t n_left = mark(base, seg, split->feature, split->threshold);
        NodeSums lsum;
        NodeSums rsum;
        if (last) {
          for (std::size_t i = seg.begin; i < seg.end; ++i) {
            const std::uint32_t r = base[i].row;
            NodeSums& s = goes_left_[r] ? lsum : rsum;
            s.g += gh[r].g;
            s.h += gh[r].h;
          }
        } else {
          partition(base, seg);
          lsum = sum(gh, next_.data(), seg.begin, seg.begin + n_left);
          rsum = sum(gh, next_.data(), seg.begin + n_left, seg.end);
        }
        const std::size_t mid = seg.begin + n_left;
        children_.push_back({seg.begin, mid, lsum, static_cast<std::size_t>(left)});
        children_.push_back({mid, seg.end, rsum, static_cast<std::size_t>(left + 1)});
      }
      if (!last) {
        std::swap(cur_, next_);
        base = cur_.data();
      }
      std::swap(open_, children_);
    }
    for (const Segment& seg : open_) {
      tree.nodes[seg.node].weight = leaf_weight(seg.total.g, seg.total.h, config.reg_lambda);
    }
    return tree;
  }

 private:
  using Entry = SortedColumns::Entry;
  struct Segment {
    std::size_t begin, end;
    NodeSums total;
    std::size_t node;
  };

  // Gradient sums in the feature-0 order of the segment; every feature
  // holds the same rows.
  static NodeSums sum(std::span<const GradPair> gh, const Entry* base, std::size_t begin,
                      std::size_t end) {
    NodeSums s;
    for (std::size_t i = begin; i < end; ++i) {
      s.g += gh[base[i].row].g;
      s.h += gh[base[i].row].h;
    }
    return s;
  }

  // Exact greedy scan of one node. Candidates are ranked by the children
  // score GL^2/(HL+l) + GR^2/(HR+l); comparisons against the running best
  // are cross-multiplied so the loop needs no division. A candidate must
  // beat the best by a relative kTieTolerance, so the lowest feature, then
  // the lowest threshold, wins ties even when two features induce the same
  // partition and their sums differ in the last bits.
  std::optional<SplitCandidate> scan(std::span<const GradPair> gh, const Entry* base,
                                     const Segment& seg, const TrainConfig& config) const {
    const double lambda = config.reg_lambda;
    const double mcw = config.min_child_weight;
    const NodeSums t = seg.total;
    double bar = t.g * t.g / (t.h + lambda) + 2.0 * (config.gamma + kMinSplitGain);
    std::optional<SplitCandidate> best;
    for (std::size_t f = 0; f < d_; ++f) {
      const Entry* it = base + f * n_;
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        if (i > seg.begin && it[i].value != it[i - 1].value) {
          const double hr = t.h - hl;
          if (hl >= mcw && hr >= mcw) {
            const double gr = t.g - gl;
            const double dl = hl + lambda;
            const double dr = hr + lambda;
            if (gl * gl * dr + gr * gr * dl > bar * dl * dr) {
              const double score = gl * gl / dl + gr * gr / dr;
              if (score > bar) {
                bar = score * (1.0 + kTieTolerance);
                best = SplitCandidate{f, midpoint(it[i - 1].value, it[i].value),
                                      split_gain(gl, hl, gr, hr, lambda, config.gamma)};
              }
            }
          }
        }
        const GradPair& p = gh[it[i].row];
        gl += p.g;
        hl += p.h;
      }
    }
    // The bar works in score units; recheck the reported gain itself.
    if (best && !(best->gain > kMinSplitGain)) best.reset();
    return best;
  }

  // Flags the rows of the segment that go left; returns how many do.
  std::size_t mark(const Entry* base, const Segment& seg, std::size_t feature, double threshold) {
    std::size_t n_left = 0;
    const Entry* col = base + feature * n_;
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      const std::uint8_t l = col[i].value < threshold ? 1 : 0;
      goes_left_[col[i].row] = l;
      n_left += l;
    }
    return n_left;
  }

  // Stable-partitions the marked segment of every feature into next_.
  // Each entry is written to both output cursors; only the cursor of its
  // side advances, which avoids a data-dependent branch. Right entries are
  // collected in spill_ and copied after the left block.
  void partition(const Entry* base, const Segment& seg) {
    for (std::size_t f = 0; f < d_; ++f) {
      const Entry* src = base + f * n_;
      Entry* dst = next_.data() + f * n_ + seg.begin;
      std::size_t li = 0;
      std::size_t ri = 0;
      for (std::size_t i = seg.begin; i < seg.end; ++i) {
        const Entry e = src[i];
        const std::size_t l = goes_left_[e.row];
        dst[li] = e;
        spill_[ri] = e;
        li += l;
        ri += 1 - l;
      }
      std::copy(spill_.begin(), spill_.begin() + static_cast<std::ptrdiff_t>(ri), dst + li);
    }
  }

  const SortedColumns& sorted_;
  std::size_t n_;
  std::size_t d_;
  std::vector<Entry> cur_;
  std::vector<Entry> next_;
  std::vector<Entry> spill_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<Segment> open_;
  std::vector<Segment> children_;
};

void check_shapes(const FeatureMatrix& x, std::span<const GradPair> gh) {
  if (gh.size() != x.rows()) {
    throw InvalidArgument("gradient count does not match the number of rows");
  }
}

}  // namespace

std::optional<SplitCandidate> best_split(const FeatureMatrix& x,
                                         std::span<const GradPair> gh,
                                         const TrainConfig& config) {
  TrainConfig stump = config;
  stump.max_depth = 1;
  check_shapes(x, gh);
  if (x.rows() == 0) return std::nullopt;
  const SortedColumns sorted(x);
  const Tree t = TreeGrower(sorted).grow(gh, stump);
  if (t.nodes[0].is_leaf()) return std::nullopt;
  return SplitCandidate{static_cast<std::size_t>(t.nodes[0].feature), t.nodes[0].threshold,
                        t.nodes[0].gain};
}

std::optional<SplitCandidate> best_split(const FeatureMatrix& x,
                                         std::span<const std::size_t> rows,
                                         std::span<const GradPair> gh,
                                         const TrainConfig& config) {
  check_shapes(x, gh);
  std::vector<char> mask(x.rows(), 0);
  for (std::size_t r : rows) mask.at(r) = 1;
  if (rows.empty()) return std::nullopt;
  TrainConfig stump = config;
  stump.max_depth = 1;
  const SortedColumns sorted(x);
  const Tree t = TreeGrower(sorted).grow(gh, stump, mask);
  if (t.nodes[0].is_leaf()) return std::nullopt;
  return SplitCandidate{static_cast<std::size_t>(t.nodes[0].feature), t.nodes[0].threshold,
                        t.nodes[0].gain};
}

Tree build_tree(const FeatureMatrix& x, std::span<const GradPair> gh,
                const TrainConfig& config) {
  return build_tree(x, SortedColumns(x), gh, config);
}

Tree build_tree(const FeatureMatrix& x, const SortedColumns& sorted,
                std::span<const GradPair> gh, const TrainConfig& config) {
  check_shapes(x, gh);
  if (x.rows() == 0) throw InvalidArgument("build_tree: no rows");
  return TreeGrower(sorted).grow(gh, config);
}

double margin_accuracy(std::span<const double> margins, std::span<const int> y) {
  if (margins.empty() || margins.size() != y.size()) {
    throw InvalidArgument("margin_accuracy: need equal nonzero lengths");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    hits += static_cast<std::size_t>((margins[i] > 0.0 ? 1 : 0) == y[i]);
  }
  return static_cast<double>(hits) / static_cast<double>(margins.size());
}

TrainResult train(const LabeledData& data, const TrainConfig& config,
                  std::span<const LabeledData* const> eval_sets, const WarningSink& warn) {
  config.validate();
  const std::size_t n = data.size();
  if (n == 0) throw InvalidArgument("train: empty training set");
  if (data.x.rows() != n) throw InvalidArgument("train: label count does not match rows");
  for (const LabeledData* e : eval_sets) {
    if (e->x.cols() != data.x.cols() || e->x.rows() != e->size() || e->size() == 0) {
      throw InvalidArgument("train: eval set shape does not match the training set");
    }
  }
  const auto positives = static_cast<std::size_t>(std::count(data.y.begin(), data.y.end(), 1));
  if ((positives == 0 || positives == n) && warn) {
    warn("training set contains a single class");
  }

  TrainResult result;
  GbmModel& model = result.model;
  model.config = config;
  model.num_features = data.x.cols();
  model.base_margin = std::log(config.base_score / (1.0 - config.base_score));
  model.trees.reserve(config.rounds);

  const SortedColumns sorted(data.x);
  TreeGrower grower(sorted);
  std::vector<double> margins(n, model.base_margin);
  std::vector<GradPair> gh(n);
  std::vector<std::vector<double>> eval_margins;
  for (const LabeledData* e : eval_sets) eval_margins.emplace_back(e->size(), model.base_margin);

  result.train_curve.reserve(config.rounds);
  result.eval_curves.assign(eval_sets.size(), {});
  for (auto& c : result.eval_curves) c.reserve(config.rounds);

  for (std::size_t round = 0; round < config.rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) gh[i] = logistic_grad_hess(margins[i], data.y[i]);
    Tree tree = grower.grow(gh, config);

    for (std::size_t i = 0; i < n; ++i) margins[i] += config.eta * tree.value(data.x.row(i));
    result.train_curve.push_back(margin_accuracy(margins, data.y));

    for (std::size_t e = 0; e < eval_sets.size(); ++e) {
      const LabeledData& set = *eval_sets[e];
      auto& m = eval_margins[e];
      for (std::size_t i = 0; i < set.size(); ++i) m[i] += config.eta * tree.value(set.x.row(i));
      result.eval_curves[e].push_back(margin_accuracy(m, set.y));
    }
    model.trees.push_back(std::move(tree));
  }
  return result;
}

double predict_margin(const GbmModel& model, std::span<const double> x) {
  double m = model.base_margin;
  for (const Tree& t : model.trees) m += model.config.eta * t.value(x);
  return m;
}

int predict_label(const GbmModel& model, std::span<const double> x) {
  return predict_margin(model, x) > 0.0 ? 1 : 0;
}

std::vector<double> feature_importance(const GbmModel& model) {
  std::vector<double> imp(model.num_features, 0.0);
  for (const Tree& t : model.trees) {
    for (const TreeNode& n : t.nodes) {
      if (!n.is_leaf()) imp[static_cast<std::size_t>(n.feature)] += n.gain;
    }
  }
  const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
  if (total > 0.0) {
    for (double& v : imp) v /= total;
  }
  return imp;
}

std::string dump_model(const GbmModel& model) {
  std::ostringstream out;
  out << "base_margin " << csv::format_double(model.base_margin) << " eta "
      << csv::format_double(model.config.eta) << " trees " << model.trees.size() << '\n';
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    out << "tree " << t << '\n';
    const auto& nodes = model.trees[t].nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const TreeNode& n = nodes[i];
      out << "  " << i << ": ";
      if (n.is_leaf()) {
        out << "leaf " << csv::format_double(n.weight) << '\n';
      } else {
        out << "x" << n.feature + 1 << " < " << csv::format_double(n.threshold) << " gain "
            << csv::format_double(n.gain) << " -> " << n.left << ' ' << n.right << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace stratcv
