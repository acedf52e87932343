#include "signrec/model.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "signrec/kernels.hpp"

namespace signrec {

namespace {

template <typename T>
void glorot_fill(Matrix<T>& m, Index fan_in, Index fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / (static_cast<double>(fan_in) + static_cast<double>(fan_out)));
  for (std::size_t k = 0; k < m.size(); ++k) {
    m.data()[k] = static_cast<T>(rng.uniform(-a, a));
  }
}

}  // namespace

template <typename T>
ModelParams<T> init_params(Index num_users, Index num_items, Index dim, Rng& rng) {
  if (num_users <= 0 || num_items <= 0 || dim <= 0) {
    throw ValidationError("model shapes must be positive");
  }
  ModelParams<T> p;
  p.e0_user.init(num_users, dim);
  p.e0_item.init(num_items, dim);
  p.w1.init(2 * dim, 2 * dim);
  p.w2.init(2 * dim, 1);
  glorot_fill(p.e0_user.value, num_users, dim, rng);
  glorot_fill(p.e0_item.value, num_items, dim, rng);
  glorot_fill(p.w1.value, 2 * dim, 2 * dim, rng);
  glorot_fill(p.w2.value, 2 * dim, 1, rng);
  return p;
}

template <typename T>
void adam_step(ModelParams<T>& params, double lr, const AdamSettings& s) {
  params.adam_steps += 1;
  const auto t = static_cast<double>(params.adam_steps);
  const double bias1 = 1.0 / (1.0 - std::pow(s.beta1, t));
  const double bias2 = 1.0 / (1.0 - std::pow(s.beta2, t));

  params.for_each_tensor([&](ParamTensor<T>& tensor) {
    const double gsq = kernels::sum_squares(tensor.grad.data(), tensor.grad.size());
    if (!std::isfinite(gsq)) {
      throw NumericError("non-finite gradient encountered in optimizer step");
    }
    kernels::adam_update(tensor.value.data(), tensor.grad.data(), tensor.moment1.data(),
                         tensor.moment2.data(), tensor.value.size(), static_cast<T>(lr),
                         static_cast<T>(s.beta1), static_cast<T>(s.beta2), static_cast<T>(s.eps),
                         static_cast<T>(bias1), static_cast<T>(bias2));
    tensor.grad.fill(T{0});
  });
}

template <typename T>
double l2_penalty(ModelParams<T>& params, double lambda) {
  double norm_sq = 0.0;
  params.for_each_tensor([&](ParamTensor<T>& tensor) {
    norm_sq += kernels::sum_squares(tensor.value.data(), tensor.value.size());
    kernels::axpy(static_cast<T>(2.0 * lambda), tensor.value.data(), tensor.grad.data(),
                  tensor.grad.size());
  });
  return norm_sq;
}

namespace {

constexpr char kMagic[8] = {'S', 'G', 'R', 'E', 'C', 'K', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

template <typename T>
void put_payload(std::ostream& out, const Matrix<T>& m) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(T)));
  } else {
    for (std::size_t k = 0; k < m.size(); ++k) {
      T v = m.data()[k];
      unsigned char buf[sizeof(T)];
      std::memcpy(buf, &v, sizeof(T));
      for (std::size_t b = 0; b < sizeof(T) / 2; ++b) std::swap(buf[b], buf[sizeof(T) - 1 - b]);
      out.write(reinterpret_cast<const char*>(buf), sizeof(T));
    }
  }
}

template <typename T>
void get_payload(std::istream& in, Matrix<T>& m) {
  if constexpr (std::endian::native == std::endian::little) {
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(T)));
  } else {
    for (std::size_t k = 0; k < m.size(); ++k) {
      unsigned char buf[sizeof(T)];
      in.read(reinterpret_cast<char*>(buf), sizeof(T));
      for (std::size_t b = 0; b < sizeof(T) / 2; ++b) std::swap(buf[b], buf[sizeof(T) - 1 - b]);
      std::memcpy(&m.data()[k], buf, sizeof(T));
    }
  }
}

struct RawHeader {
  std::uint64_t scalar_size = 0;
  std::uint64_t num_users = 0, num_items = 0, dim = 0, num_layers = 0;
  std::uint64_t adam_steps = 0;
};

RawHeader read_header(std::istream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw IoError("not a checkpoint file: " + path);
  }
  const auto version = get_u64(in);
  if (version != kVersion) {
    throw IoError("unsupported checkpoint version in " + path);
  }
  RawHeader h;
  h.scalar_size = get_u64(in);
  h.num_users = get_u64(in);
  h.num_items = get_u64(in);
  h.dim = get_u64(in);
  h.num_layers = get_u64(in);
  h.adam_steps = get_u64(in);
  if (!in || (h.scalar_size != 4 && h.scalar_size != 8) || h.num_users == 0 ||
      h.num_items == 0 || h.dim == 0 || h.num_layers == 0) {
    throw IoError("corrupted checkpoint header in " + path);
  }
  return h;
}

}  // namespace

template <typename T>
void save_checkpoint(const std::string& path, const ModelParams<T>& params, int num_layers) {
  if (num_layers < 1) throw ValidationError("num_layers must be >= 1");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path);

  out.write(kMagic, 8);
  put_u64(out, kVersion);
  put_u64(out, sizeof(T));
  put_u64(out, static_cast<std::uint64_t>(params.num_users()));
  put_u64(out, static_cast<std::uint64_t>(params.num_items()));
  put_u64(out, static_cast<std::uint64_t>(params.dim()));
  put_u64(out, static_cast<std::uint64_t>(num_layers));
  put_u64(out, static_cast<std::uint64_t>(params.adam_steps));

  params.for_each_tensor([&](const ParamTensor<T>& t) { put_payload(out, t.value); });
  params.for_each_tensor([&](const ParamTensor<T>& t) { put_payload(out, t.moment1); });
  params.for_each_tensor([&](const ParamTensor<T>& t) { put_payload(out, t.moment2); });

  if (!out) throw IoError("failed writing checkpoint: " + path);
}

CheckpointInfo peek_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  const auto h = read_header(in, path);
  CheckpointInfo info;
  info.precision = h.scalar_size == 4 ? Precision::single_prec : Precision::double_prec;
  info.num_users = static_cast<Index>(h.num_users);
  info.num_items = static_cast<Index>(h.num_items);
  info.dim = static_cast<Index>(h.dim);
  info.num_layers = static_cast<int>(h.num_layers);
  return info;
}

template <typename T>
Checkpoint<T> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path);
  const auto h = read_header(in, path);
  if (h.scalar_size != sizeof(T)) {
    throw ValidationError("checkpoint precision does not match requested scalar type");
  }

  Checkpoint<T> ck;
  ck.num_layers = static_cast<int>(h.num_layers);
  auto& p = ck.params;
  p.adam_steps = static_cast<std::int64_t>(h.adam_steps);
  p.e0_user.init(static_cast<Index>(h.num_users), static_cast<Index>(h.dim));
  p.e0_item.init(static_cast<Index>(h.num_items), static_cast<Index>(h.dim));
  p.w1.init(2 * static_cast<Index>(h.dim), 2 * static_cast<Index>(h.dim));
  p.w2.init(2 * static_cast<Index>(h.dim), 1);

  p.for_each_tensor([&](ParamTensor<T>& t) { get_payload(in, t.value); });
  p.for_each_tensor([&](ParamTensor<T>& t) { get_payload(in, t.moment1); });
  p.for_each_tensor([&](ParamTensor<T>& t) { get_payload(in, t.moment2); });
  if (!in) throw IoError("truncated checkpoint: " + path);

  // Exactly at end of file?
  in.peek();
  if (!in.eof()) throw IoError("trailing bytes in checkpoint: " + path);
  return ck;
}

template ModelParams<float> init_params(Index, Index, Index, Rng&);
template ModelParams<double> init_params(Index, Index, Index, Rng&);
template void adam_step(ModelParams<float>&, double, const AdamSettings&);
template void adam_step(ModelParams<double>&, double, const AdamSettings&);
template double l2_penalty(ModelParams<float>&, double);
template double l2_penalty(ModelParams<double>&, double);
template void save_checkpoint(const std::string&, const ModelParams<float>&, int);
template void save_checkpoint(const std::string&, const ModelParams<double>&, int);
template Checkpoint<float> load_checkpoint(const std::string&);
template Checkpoint<double> load_checkpoint(const std::string&);

}  // namespace signrec
