#pragma once

#include "csie/common.hpp"
#include "csie/kernels.hpp"
#include "csie/potentials.hpp"
#include "csie/quadrature.hpp"
#include "csie/rwg.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace csie {

struct AssemblyOptions {
  int quad_obs = 3;
  int quad_src = 5;
  /// Pairs whose centroid distance is below near_factor times the larger
  /// triangle diameter get the static 1/R part integrated analytically.
  double near_factor = 2.0;
  /// 0 selects std::thread::hardware_concurrency().
  int workers = 0;
};

/// Moment-method blocks over one RWG space (all N x N):
///   A_mn  = -iint (n x beta_n) . beta_m ds            rotated Gram, antisymmetric
///   A'_mn =  iint beta_m . beta_n ds                  Gram, SPD
///   B_mn  =  iint iint beta_m . beta_n G ds' ds
///   C_mn  = -iint iint (div beta_m)(div' beta_n) G ds' ds
///   D_mn  =  iint beta_m . PV iint grad G x beta_n ds' ds
///   K_mn  =  iint (n x beta_m) . PV iint grad G x beta_n ds' ds
/// D tests n x (grad G x M) with n x beta_m, which reduces to a plain beta_m
/// dot product; K is the MFIE operator with the same kernel.
struct SystemBlocks {
  double k0 = 0.0;
  RealMatrix A;
  RealMatrix Aprime;
  ComplexMatrix B;
  ComplexMatrix C;
  ComplexMatrix D;
  ComplexMatrix K;
};

namespace detail {

struct TriangleSamples {
  std::vector<Vec3> points;
  std::vector<double> weights; // quadrature weight times area
};

inline std::vector<TriangleSamples> sample_triangles(const TriangleMesh &mesh, const TriangleQuadratureRule &rule) {
  std::vector<TriangleSamples> out(mesh.num_triangles());
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    out[t].points = rule.map(mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2));
    out[t].weights.resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q)
      out[t].weights[q] = rule.weights[q] * mesh.area(t);
  }
  return out;
}

/// Greedy colouring of triangles such that two triangles sharing an RWG
/// function never have the same colour. Rows touched by triangles of one
/// colour are disjoint, so a colour can be assembled concurrently.
inline std::vector<std::vector<int>> colour_triangles(const RwgSpace &space) {
  const int nt = static_cast<int>(space.mesh().num_triangles());
  std::vector<std::vector<int>> neighbours(nt);
  for (const auto &e : space.edges()) {
    neighbours[e.plus].push_back(e.minus);
    neighbours[e.minus].push_back(e.plus);
  }
  std::vector<int> colour(nt, -1);
  std::vector<std::vector<int>> groups;
  for (int t = 0; t < nt; ++t) {
    std::vector<bool> used(groups.size() + 1, false);
    for (int nb : neighbours[t])
      if (colour[nb] >= 0)
        used[colour[nb]] = true;
    int c = 0;
    while (used[c])
      ++c;
    colour[t] = c;
    if (c == static_cast<int>(groups.size()))
      groups.emplace_back();
    groups[c].push_back(t);
  }
  return groups;
}

/// Run fn(t) for every triangle, colour by colour. Within a colour the
/// triangles are split into contiguous chunks, one per worker.
template <class Fn>
void for_each_triangle_coloured(const RwgSpace &space, int workers, Fn &&fn) {
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  for (const auto &group : colour_triangles(space)) {
    const int n = static_cast<int>(group.size());
    const int w = std::min(workers, n);
    if (w <= 1) {
      for (int t : group)
        fn(t);
      continue;
    }
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int k = 0; k < w; ++k) {
      int lo = n * k / w, hi = n * (k + 1) / w;
      pool.emplace_back([&, lo, hi] {
        for (int i = lo; i < hi; ++i)
          fn(group[i]);
      });
    }
    for (auto &th : pool)
      th.join();
  }
}

} // namespace detail

/// Rotated Gram matrix A. Supports overlap only on shared triangles.
inline RealMatrix assemble_gram_A(const RwgSpace &space) {
  const auto &mesh = space.mesh();
  const int n = space.size();
  RealMatrix A = RealMatrix::Zero(n, n);
  auto samples = detail::sample_triangles(mesh, triangle_rule(5));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto &loc = space.local(t);
    const Vec3 &nrm = mesh.normal(t);
    for (std::size_t q = 0; q < samples[t].points.size(); ++q) {
      const Vec3 &r = samples[t].points[q];
      double w = samples[t].weights[q];
      for (const auto &bm : loc) {
        if (bm.index < 0)
          continue;
        Vec3 vm = bm.coef * (r - bm.free_vertex);
        for (const auto &bn : loc) {
          if (bn.index < 0)
            continue;
          Vec3 vn = bn.coef * (r - bn.free_vertex);
          A(bm.index, bn.index) -= w * nrm.cross(vn).dot(vm);
        }
      }
    }
  }
  return A;
}

/// RWG Gram matrix A'.
inline RealMatrix assemble_gram_Aprime(const RwgSpace &space) {
  const auto &mesh = space.mesh();
  const int n = space.size();
  RealMatrix G = RealMatrix::Zero(n, n);
  auto samples = detail::sample_triangles(mesh, triangle_rule(5));
  for (int t = 0; t < static_cast<int>(mesh.num_triangles()); ++t) {
    const auto &loc = space.local(t);
    for (std::size_t q = 0; q < samples[t].points.size(); ++q) {
      const Vec3 &r = samples[t].points[q];
      double w = samples[t].weights[q];
      for (const auto &bm : loc) {
        if (bm.index < 0)
          continue;
        Vec3 vm = bm.coef * (r - bm.free_vertex);
        for (const auto &bn : loc) {
          if (bn.index < 0)
            continue;
          G(bm.index, bn.index) += w * vm.dot(bn.coef * (r - bn.free_vertex));
        }
      }
    }
  }
  return G;
}

enum BlockMask : unsigned {
  block_B = 1u << 0,
  block_C = 1u << 1,
  block_D = 1u << 2,
  block_K = 1u << 3,
  block_all = block_B | block_C | block_D | block_K,
};

/// Kernel blocks B, C, D, K in a single pass over triangle pairs. Only the
/// blocks named in `mask` are allocated. B and C are symmetrised, which is
/// the Galerkin average of the two quadrature orderings.
inline SystemBlocks assemble_kernel_blocks(const RwgSpace &space, const KernelEvaluator &eval,
                                           const AssemblyOptions &opts = {}, unsigned mask = block_all) {
  const auto &mesh = space.mesh();
  const int n = space.size();
  const int nt = static_cast<int>(mesh.num_triangles());
  const double k0 = eval.k0();
  const bool want_b = mask & block_B, want_c = mask & block_C, want_d = mask & block_D, want_k = mask & block_K;
  const bool want_grad = want_d || want_k;

  SystemBlocks out;
  out.k0 = k0;
  if (want_b)
    out.B = ComplexMatrix::Zero(n, n);
  if (want_c)
    out.C = ComplexMatrix::Zero(n, n);
  if (want_d)
    out.D = ComplexMatrix::Zero(n, n);
  if (want_k)
    out.K = ComplexMatrix::Zero(n, n);

  const auto obs = detail::sample_triangles(mesh, triangle_rule(opts.quad_obs));
  const auto src = detail::sample_triangles(mesh, triangle_rule(opts.quad_src));

  detail::for_each_triangle_coloured(space, opts.workers, [&](int to) {
    const auto &loc_o = space.local(to);
    const Vec3 &n_o = mesh.normal(to);
    const auto &po = obs[to];
    for (int ts = 0; ts < nt; ++ts) {
      const auto &loc_s = space.local(ts);
      const auto &ps = src[ts];
      const double dist = (mesh.centroid(to) - mesh.centroid(ts)).norm();
      const bool near = dist < opts.near_factor * std::max(mesh.diameter(to), mesh.diameter(ts));
      const bool self = to == ts;
      const Vec3 &a = mesh.corner(ts, 0), &b = mesh.corner(ts, 1), &c = mesh.corner(ts, 2);

      for (std::size_t qo = 0; qo < po.points.size(); ++qo) {
        const Vec3 &r = po.points[qo];
        const double wo = po.weights[qo];
        cplx s0 = 0.0;
        CVec3 s1 = CVec3::Zero();
        CVec3 g = CVec3::Zero();
        if (near) {
          auto st = static_potentials(a, b, c, r);
          s0 = st.scalar / (4.0 * pi);
          s1 = ((st.vector + st.projection * st.scalar) / (4.0 * pi)).cast<cplx>();
          if (want_grad)
            g = (st.gradient / (4.0 * pi)).cast<cplx>();
          for (std::size_t qs = 0; qs < ps.points.size(); ++qs) {
            const Vec3 &rp = ps.points[qs];
            Vec3 d = r - rp;
            double R = d.norm();
            cplx gs = ps.weights[qs] * eval.green_smooth(R);
            s0 += gs;
            s1 += rp.cast<cplx>() * gs;
            if (want_grad)
              g += d.cast<cplx>() * (ps.weights[qs] * eval.grad_green_smooth_factor(R));
          }
        } else {
          for (std::size_t qs = 0; qs < ps.points.size(); ++qs) {
            const Vec3 &rp = ps.points[qs];
            Vec3 d = r - rp;
            double R = d.norm();
            double w = ps.weights[qs];
            cplx e = std::polar(w / (4.0 * pi * R), -k0 * R);
            s0 += e;
            s1 += rp.cast<cplx>() * e;
            if (want_grad)
              g += d.cast<cplx>() * (-(1.0 + j_unit * (k0 * R)) * e / (R * R));
          }
        }

        for (const auto &bm : loc_o) {
          if (bm.index < 0)
            continue;
          const Vec3 rm = r - bm.free_vertex;
          const CVec3 rmc = rm.cast<cplx>();
          const CVec3 nxrm = n_o.cross(rm).cast<cplx>();
          for (const auto &bn : loc_s) {
            if (bn.index < 0)
              continue;
            const double cc = wo * bm.coef * bn.coef;
            if (want_b)
              out.B(bm.index, bn.index) += cc * rmc.dot(s1 - bn.free_vertex.cast<cplx>() * s0);
            if (want_c)
              out.C(bm.index, bn.index) -= 4.0 * cc * s0;
            if (want_grad && !self) {
              CVec3 gx = cross(g, (r - bn.free_vertex).cast<cplx>());
              if (want_d)
                out.D(bm.index, bn.index) += cc * rmc.dot(gx);
              if (want_k)
                out.K(bm.index, bn.index) += cc * nxrm.dot(gx);
            }
          }
        }
      }
    }
  });

  // Eigen's dot() conjugates the first argument; all first arguments above are real.
  if (want_b)
    out.B = 0.5 * (out.B + out.B.transpose()).eval();
  if (want_c)
    out.C = 0.5 * (out.C + out.C.transpose()).eval();
  return out;
}

inline std::pair<ComplexMatrix, ComplexMatrix> assemble_efie_blocks(const RwgSpace &space, const KernelEvaluator &eval,
                                                                    const AssemblyOptions &opts = {}) {
  auto blocks = assemble_kernel_blocks(space, eval, opts, block_B | block_C);
  return {std::move(blocks.B), std::move(blocks.C)};
}

inline ComplexMatrix assemble_D_block(const RwgSpace &space, const KernelEvaluator &eval,
                                      const AssemblyOptions &opts = {}) {
  return std::move(assemble_kernel_blocks(space, eval, opts, block_D).D);
}

/// MFIE operator K; the tested MFIE reads (A'/2 + K) I = <beta_m, n x H_inc>.
inline ComplexMatrix assemble_mfie(const RwgSpace &space, const KernelEvaluator &eval,
                                   const AssemblyOptions &opts = {}) {
  return std::move(assemble_kernel_blocks(space, eval, opts, block_K).K);
}

inline SystemBlocks assemble_blocks(const RwgSpace &space, const KernelEvaluator &eval,
                                    const AssemblyOptions &opts = {}, unsigned mask = block_all) {
  auto out = assemble_kernel_blocks(space, eval, opts, mask);
  out.A = assemble_gram_A(space);
  out.Aprime = assemble_gram_Aprime(space);
  return out;
}

} // namespace csie
