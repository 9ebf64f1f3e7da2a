#include "gwe/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gwe {

TransportSimplex::TransportSimplex(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)) {
  n_ = static_cast<int>(a_.size());
  m_ = static_cast<int>(b_.size());
  N_ = n_ + m_;
  if (n_ < 1 || m_ < 1) throw DomainError("TransportSimplex: empty marginal");
  if ((a_.array() <= 0).any() || (b_.array() <= 0).any())
    throw DomainError("TransportSimplex: marginals must be strictly positive");
  parent_.assign(static_cast<std::size_t>(N_), -1);
  first_child_.assign(static_cast<std::size_t>(N_), -1);
  next_sib_.assign(static_cast<std::size_t>(N_), -1);
  prev_sib_.assign(static_cast<std::size_t>(N_), -1);
  flow_to_parent_.assign(static_cast<std::size_t>(N_), 0.0);
  depth_.assign(static_cast<std::size_t>(N_), 0);
  pot_ = Vec::Zero(N_);
}

namespace {
struct BasicArc {
  int row, col;
  double flow;
};
}  // namespace

void TransportSimplex::northwest_start() {
  std::vector<BasicArc> arcs;
  arcs.reserve(static_cast<std::size_t>(N_ - 1));
  int i = 0, j = 0;
  double ra = a_(0), rb = b_(0);
  while (true) {
    const double f = std::min(ra, rb);
    arcs.push_back({i, j, f});
    ra -= f;
    rb -= f;
    if (i == n_ - 1 && j == m_ - 1) break;
    if (ra <= 0.0 && i < n_ - 1) {
      ++i;
      ra = a_(i);
    } else {
      ++j;
      rb = b_(j);
    }
  }

  // Build the tree arrays from the staircase basis, rooted at row 0.
  std::fill(parent_.begin(), parent_.end(), -1);
  std::fill(first_child_.begin(), first_child_.end(), -1);
  std::fill(next_sib_.begin(), next_sib_.end(), -1);
  std::fill(prev_sib_.begin(), prev_sib_.end(), -1);
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(N_));
  for (const BasicArc& arc : arcs) {
    adj[static_cast<std::size_t>(arc.row)].push_back({n_ + arc.col, arc.flow});
    adj[static_cast<std::size_t>(n_ + arc.col)].push_back({arc.row, arc.flow});
  }
  std::vector<int> stack{0};
  std::vector<char> seen(static_cast<std::size_t>(N_), 0);
  seen[0] = 1;
  depth_[0] = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& [w, f] : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(w)]) continue;
      seen[static_cast<std::size_t>(w)] = 1;
      parent_[static_cast<std::size_t>(w)] = u;
      flow_to_parent_[static_cast<std::size_t>(w)] = f;
      depth_[static_cast<std::size_t>(w)] = depth_[static_cast<std::size_t>(u)] + 1;
      next_sib_[static_cast<std::size_t>(w)] = first_child_[static_cast<std::size_t>(u)];
      if (first_child_[static_cast<std::size_t>(u)] >= 0)
        prev_sib_[static_cast<std::size_t>(first_child_[static_cast<std::size_t>(u)])] = w;
      prev_sib_[static_cast<std::size_t>(w)] = -1;
      first_child_[static_cast<std::size_t>(u)] = w;
      stack.push_back(w);
    }
  }
  has_basis_ = true;
}

void TransportSimplex::compute_duals(const RowMat& C) {
  std::vector<int> stack{0};
  pot_(0) = 0.0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int w = first_child_[static_cast<std::size_t>(u)]; w >= 0;
         w = next_sib_[static_cast<std::size_t>(w)]) {
      const int row = (w < n_) ? w : u;
      const int col = (w < n_) ? u - n_ : w - n_;
      pot_(w) = C(row, col) - pot_(u);
      stack.push_back(w);
    }
  }
}

TransportSimplex::Solution TransportSimplex::solve(const RowMat& C, double rel_tol) {
  if (C.rows() != n_ || C.cols() != m_) throw DomainError("TransportSimplex: cost shape mismatch");
  if (!C.allFinite()) throw DomainError("TransportSimplex: non-finite cost entry");

  if (!has_basis_) northwest_start();
  compute_duals(C);

  const double tol = std::max(rel_tol * C.cwiseAbs().maxCoeff(), 1e-300);
  const long arc_block =
      std::max<long>(m_, static_cast<long>(std::sqrt(static_cast<double>(n_) * m_)));
  const long max_pivots = 256L * N_ + 10000L;

  long pivots = 0;
  long degenerate_run = 0;
  bool bland = false;
  int cursor_row = 0;
  bool certified = false;  // duals were recomputed and a full sweep was clean

  std::vector<int> path_i, path_j;  // nodes from each endpoint up to the apex

  while (true) {
    // --- pricing ---
    int best_i = -1, best_j = -1;
    double best_r = -tol;
    if (!bland) {
      long scanned = 0;
      int row = cursor_row;
      for (int steps = 0; steps < n_; ++steps) {
        const double ui = pot_(row);
        const double* crow = C.data() + static_cast<std::ptrdiff_t>(row) * m_;
        for (int j = 0; j < m_; ++j) {
          const double r = crow[j] - ui - pot_(n_ + j);
          if (r < best_r) {
            best_r = r;
            best_i = row;
            best_j = j;
          }
        }
        scanned += m_;
        row = (row + 1 == n_) ? 0 : row + 1;
        if (best_i >= 0 && scanned >= arc_block) break;
      }
      cursor_row = row;
    } else {
      // Bland: first eligible arc in row-major order.
      for (int i = 0; i < n_ && best_i < 0; ++i) {
        const double ui = pot_(i);
        const double* crow = C.data() + static_cast<std::ptrdiff_t>(i) * m_;
        for (int j = 0; j < m_; ++j) {
          if (crow[j] - ui - pot_(n_ + j) < -tol) {
            best_i = i;
            best_j = j;
            best_r = crow[j] - ui - pot_(n_ + j);
            break;
          }
        }
      }
    }

    if (best_i < 0) {
      if (certified) break;
      // Refresh duals (incremental updates drift) and do one clean sweep.
      compute_duals(C);
      certified = true;
      continue;
    }
    certified = false;

    // --- cycle between entering arc endpoints ---
    const int ri = best_i, cj = n_ + best_j;
    const double red_cost = best_r;
    path_i.clear();
    path_j.clear();
    {
      int x = ri, y = cj;
      while (depth_[static_cast<std::size_t>(x)] > depth_[static_cast<std::size_t>(y)]) {
        path_i.push_back(x);
        x = parent_[static_cast<std::size_t>(x)];
      }
      while (depth_[static_cast<std::size_t>(y)] > depth_[static_cast<std::size_t>(x)]) {
        path_j.push_back(y);
        y = parent_[static_cast<std::size_t>(y)];
      }
      while (x != y) {
        path_i.push_back(x);
        path_j.push_back(y);
        x = parent_[static_cast<std::size_t>(x)];
        y = parent_[static_cast<std::size_t>(y)];
      }
    }

    // Arcs at even index from either endpoint lose theta.
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;      // node whose parent-arc leaves the basis
    bool leave_on_i = true;
    auto consider = [&](const std::vector<int>& path, bool on_i) {
      for (std::size_t k = 0; k < path.size(); k += 2) {
        const double f = flow_to_parent_[static_cast<std::size_t>(path[k])];
        if (f < theta) {  // strict: first minimizer in scan order wins
          theta = f;
          leave = path[k];
          leave_on_i = on_i;
        }
      }
    };
    consider(path_i, true);
    consider(path_j, false);
    if (leave < 0) throw ConstructionError("TransportSimplex: unbounded pivot");

    if (theta <= 0.0) {
      if (++degenerate_run > N_) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }

    // --- update flows along the cycle ---
    auto apply = [&](const std::vector<int>& path) {
      double sign = -1.0;
      for (int x : path) {
        flow_to_parent_[static_cast<std::size_t>(x)] += sign * theta;
        sign = -sign;
      }
    };
    apply(path_i);
    apply(path_j);

    // --- re-hang: reverse parents from the entering endpoint on the
    // leaving side down to `leave`, then attach under the other endpoint ---
    const int enter_child = leave_on_i ? ri : cj;   // stays inside the cut subtree
    const int enter_parent = leave_on_i ? cj : ri;  // outside

    auto detach = [&](int x) {
      const int p = parent_[static_cast<std::size_t>(x)];
      const int prev = prev_sib_[static_cast<std::size_t>(x)];
      const int next = next_sib_[static_cast<std::size_t>(x)];
      if (prev >= 0)
        next_sib_[static_cast<std::size_t>(prev)] = next;
      else
        first_child_[static_cast<std::size_t>(p)] = next;
      if (next >= 0) prev_sib_[static_cast<std::size_t>(next)] = prev;
    };
    auto attach = [&](int x, int p) {
      parent_[static_cast<std::size_t>(x)] = p;
      prev_sib_[static_cast<std::size_t>(x)] = -1;
      next_sib_[static_cast<std::size_t>(x)] = first_child_[static_cast<std::size_t>(p)];
      if (first_child_[static_cast<std::size_t>(p)] >= 0)
        prev_sib_[static_cast<std::size_t>(first_child_[static_cast<std::size_t>(p)])] = x;
      first_child_[static_cast<std::size_t>(p)] = x;
    };

    {
      int x = enter_child;
      int prev = enter_parent;
      double carry_flow = theta;  // flow on the entering arc
      while (true) {
        const int old_parent = parent_[static_cast<std::size_t>(x)];
        const double old_flow = flow_to_parent_[static_cast<std::size_t>(x)];
        detach(x);
        attach(x, prev);
        flow_to_parent_[static_cast<std::size_t>(x)] = carry_flow;
        if (x == leave) break;
        prev = x;
        x = old_parent;
        carry_flow = old_flow;
      }
    }

    // --- depths and potentials of the re-hung subtree ---
    // If the subtree kept the column endpoint, columns gain the reduced
    // cost and rows lose it (and conversely), which restores u + v = C on
    // the entering arc while preserving it inside the subtree.
    const double row_shift = leave_on_i ? red_cost : -red_cost;
    std::vector<int> stack{enter_child};
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      depth_[static_cast<std::size_t>(x)] =
          depth_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])] + 1;
      pot_(x) += (x < n_) ? row_shift : -row_shift;
      for (int w = first_child_[static_cast<std::size_t>(x)]; w >= 0;
           w = next_sib_[static_cast<std::size_t>(w)])
        stack.push_back(w);
    }

    if (++pivots > max_pivots)
      throw ConstructionError("TransportSimplex: pivot limit exceeded");
  }

  compute_duals(C);
  Solution sol;
  sol.pivots = pivots;
  sol.plan.reserve(static_cast<std::size_t>(N_ - 1));
  double value = 0;
  for (int w = 1; w < N_; ++w) {
    const int p = parent_[static_cast<std::size_t>(w)];
    const int row = (w < n_) ? w : p;
    const int col = (w < n_) ? p - n_ : w - n_;
    const double f = flow_to_parent_[static_cast<std::size_t>(w)];
    sol.plan.push_back({row, col, f});
    value += f * C(row, col);
  }
  sol.value = value;
  sol.u = pot_.head(n_);
  sol.v = pot_.tail(m_);
  return sol;
}

}  // namespace gwe
