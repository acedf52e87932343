#include "signrec/propagation.hpp"

#include <string>

#include "signrec/kernels.hpp"

namespace signrec {

namespace {

template <typename T>
void check_dims(const SignedBipartiteGraph& g, const Matrix<T>& user_rows,
                const Matrix<T>& item_rows) {
  if (user_rows.rows() != g.num_users() || item_rows.rows() != g.num_items() ||
      user_rows.cols() != item_rows.cols() || user_rows.cols() <= 0) {
    throw ValidationError("embedding shapes do not match graph dimensions");
  }
}

// out[r] += sum over csr row r of weight * in[neighbor]
template <typename T>
void spmm(const CsrAdjacency& adj, const Matrix<T>& in, Matrix<T>& out) {
  const Index rows = adj.rows();
  const std::size_t d = static_cast<std::size_t>(in.cols());
  for (Index r = 0; r < rows; ++r) {
    const auto nbrs = adj.row(r);
    const auto wts = adj.row_weights(r);
    T* dst = out.row(r).data();
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      kernels::axpy(static_cast<T>(wts[k]), in.row(nbrs[k]).data(), dst, d);
    }
  }
}

}  // namespace

template <typename T>
LayerQuad<T> propagate_first_layer(const SignedBipartiteGraph& graph, const Matrix<T>& e0_user,
                                   const Matrix<T>& e0_item) {
  check_dims(graph, e0_user, e0_item);
  const Index d = e0_user.cols();
  LayerQuad<T> out;
  out.pos_user = Matrix<T>(graph.num_users(), d);
  out.neg_user = Matrix<T>(graph.num_users(), d);
  out.pos_item = Matrix<T>(graph.num_items(), d);
  out.neg_item = Matrix<T>(graph.num_items(), d);
  spmm(graph.pos_user_to_item(), e0_item, out.pos_user);
  spmm(graph.neg_user_to_item(), e0_item, out.neg_user);
  spmm(graph.pos_item_to_user(), e0_user, out.pos_item);
  spmm(graph.neg_item_to_user(), e0_user, out.neg_item);
  return out;
}

template <typename T>
LayerQuad<T> propagate_higher_layer(const SignedBipartiteGraph& graph, const LayerQuad<T>& prev) {
  check_dims(graph, prev.pos_user, prev.pos_item);
  check_dims(graph, prev.neg_user, prev.neg_item);
  const Index d = prev.pos_user.cols();
  LayerQuad<T> out;
  out.pos_user = Matrix<T>(graph.num_users(), d);
  out.neg_user = Matrix<T>(graph.num_users(), d);
  out.pos_item = Matrix<T>(graph.num_items(), d);
  out.neg_item = Matrix<T>(graph.num_items(), d);
  spmm(graph.pos_user_to_item(), prev.pos_item, out.pos_user);
  spmm(graph.pos_user_to_item(), prev.neg_item, out.neg_user);
  spmm(graph.pos_item_to_user(), prev.pos_user, out.pos_item);
  spmm(graph.pos_item_to_user(), prev.neg_user, out.neg_item);
  return out;
}

template <typename T>
FinalEmbeddings<T> combine_layers(const EmbeddingState<T>& state) {
  const int L = state.num_layers;
  if (L < 1 || static_cast<int>(state.pos_user.size()) != L + 1) {
    throw ValidationError("layer combination requires at least one propagation layer");
  }
  const Index d = state.pos_user[0].cols();
  const Index m = state.pos_user[0].rows();
  const Index n = state.pos_item[0].rows();

  FinalEmbeddings<T> f;
  f.pos_user = Matrix<T>(m, d);
  f.pos_item = Matrix<T>(n, d);
  f.neg_user = Matrix<T>(m, d);
  f.neg_item = Matrix<T>(n, d);

  const T inv_pos = T{1} / static_cast<T>(L + 1);
  const T inv_neg = T{1} / static_cast<T>(L);
  for (int l = 0; l <= L; ++l) {
    kernels::axpy(inv_pos, state.pos_user[l].data(), f.pos_user.data(), f.pos_user.size());
    kernels::axpy(inv_pos, state.pos_item[l].data(), f.pos_item.data(), f.pos_item.size());
    if (l >= 1) {
      kernels::axpy(inv_neg, state.neg_user[l].data(), f.neg_user.data(), f.neg_user.size());
      kernels::axpy(inv_neg, state.neg_item[l].data(), f.neg_item.data(), f.neg_item.size());
    }
  }
  return f;
}

template <typename T>
EmbeddingState<T> full_forward(const SignedBipartiteGraph& graph, const Matrix<T>& e0_user,
                               const Matrix<T>& e0_item, int num_layers) {
  if (num_layers < 1) {
    throw ValidationError("num_layers must be >= 1, got " + std::to_string(num_layers));
  }
  check_dims(graph, e0_user, e0_item);

  EmbeddingState<T> state;
  state.num_layers = num_layers;
  state.pos_user.push_back(e0_user);
  state.pos_item.push_back(e0_item);
  state.neg_user.emplace_back();  // negative channel has no layer 0
  state.neg_item.emplace_back();

  LayerQuad<T> quad = propagate_first_layer(graph, e0_user, e0_item);
  state.pos_user.push_back(quad.pos_user);
  state.pos_item.push_back(quad.pos_item);
  state.neg_user.push_back(quad.neg_user);
  state.neg_item.push_back(quad.neg_item);
  for (int l = 2; l <= num_layers; ++l) {
    quad = propagate_higher_layer(graph, quad);
    state.pos_user.push_back(quad.pos_user);
    state.pos_item.push_back(quad.pos_item);
    state.neg_user.push_back(quad.neg_user);
    state.neg_item.push_back(quad.neg_item);
  }
  state.finals = combine_layers(state);
  return state;
}

template <typename T>
void backward(const SignedBipartiteGraph& graph, int num_layers,
              const FinalGradients<T>& upstream, Matrix<T>& grad_e0_user,
              Matrix<T>& grad_e0_item) {
  if (num_layers < 1) {
    throw ValidationError("num_layers must be >= 1, got " + std::to_string(num_layers));
  }
  check_dims(graph, upstream.pos_user, upstream.pos_item);
  check_dims(graph, grad_e0_user, grad_e0_item);
  const Index d = grad_e0_user.cols();
  const int L = num_layers;

  // Positive chain: finals average the powers of the positive operator,
  // which is symmetric, so the adjoint is the same propagation applied
  // to the upstream gradient.
  Matrix<T> acc_u = upstream.pos_user;
  Matrix<T> acc_i = upstream.pos_item;
  Matrix<T> tot_u = acc_u;
  Matrix<T> tot_i = acc_i;
  Matrix<T> next_u(graph.num_users(), d), next_i(graph.num_items(), d);
  for (int l = 1; l <= L; ++l) {
    next_u.fill(T{0});
    next_i.fill(T{0});
    spmm(graph.pos_user_to_item(), acc_i, next_u);
    spmm(graph.pos_item_to_user(), acc_u, next_i);
    std::swap(acc_u, next_u);
    std::swap(acc_i, next_i);
    kernels::axpy(T{1}, acc_u.data(), tot_u.data(), tot_u.size());
    kernels::axpy(T{1}, acc_i.data(), tot_i.data(), tot_i.size());
  }
  const T inv_pos = T{1} / static_cast<T>(L + 1);
  kernels::axpy(inv_pos, tot_u.data(), grad_e0_user.data(), grad_e0_user.size());
  kernels::axpy(inv_pos, tot_i.data(), grad_e0_item.data(), grad_e0_item.size());

  // Negative chain: the map is (negative hop) followed by L-1 positive
  // hops, averaged. Adjoint: push the gradient back through the positive
  // powers first, then through the negative operator once.
  acc_u = upstream.neg_user;
  acc_i = upstream.neg_item;
  tot_u = acc_u;
  tot_i = acc_i;
  for (int l = 1; l <= L - 1; ++l) {
    next_u.fill(T{0});
    next_i.fill(T{0});
    spmm(graph.pos_user_to_item(), acc_i, next_u);
    spmm(graph.pos_item_to_user(), acc_u, next_i);
    std::swap(acc_u, next_u);
    std::swap(acc_i, next_i);
    kernels::axpy(T{1}, acc_u.data(), tot_u.data(), tot_u.size());
    kernels::axpy(T{1}, acc_i.data(), tot_i.data(), tot_i.size());
  }
  const T inv_neg = T{1} / static_cast<T>(L);
  next_u.fill(T{0});
  next_i.fill(T{0});
  spmm(graph.neg_user_to_item(), tot_i, next_u);
  spmm(graph.neg_item_to_user(), tot_u, next_i);
  kernels::axpy(inv_neg, next_u.data(), grad_e0_user.data(), grad_e0_user.size());
  kernels::axpy(inv_neg, next_i.data(), grad_e0_item.data(), grad_e0_item.size());
}

template LayerQuad<float> propagate_first_layer(const SignedBipartiteGraph&, const Matrix<float>&,
                                                const Matrix<float>&);
template LayerQuad<double> propagate_first_layer(const SignedBipartiteGraph&,
                                                 const Matrix<double>&, const Matrix<double>&);
template LayerQuad<float> propagate_higher_layer(const SignedBipartiteGraph&,
                                                 const LayerQuad<float>&);
template LayerQuad<double> propagate_higher_layer(const SignedBipartiteGraph&,
                                                  const LayerQuad<double>&);
template FinalEmbeddings<float> combine_layers(const EmbeddingState<float>&);
template FinalEmbeddings<double> combine_layers(const EmbeddingState<double>&);
template EmbeddingState<float> full_forward(const SignedBipartiteGraph&, const Matrix<float>&,
                                            const Matrix<float>&, int);
template EmbeddingState<double> full_forward(const SignedBipartiteGraph&, const Matrix<double>&,
                                             const Matrix<double>&, int);
template void backward(const SignedBipartiteGraph&, int, const FinalGradients<float>&,
                       Matrix<float>&, Matrix<float>&);
template void backward(const SignedBipartiteGraph&, int, const FinalGradients<double>&,
                       Matrix<double>&, Matrix<double>&);

}  // namespace signrec
