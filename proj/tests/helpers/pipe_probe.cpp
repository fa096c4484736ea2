// Child process for exercising the pipe-denoiser protocol. Reads one tensor
// from stdin, writes one back per the selected mode:
//   identity        echo the tensor
//   soft <tau>      soft-threshold every entry at tau
//   soft-eta        soft-threshold at tau = DENOISER_ETA
//   wrongshape      return a tensor with a different shape
//   garbage         print junk instead of a tensor
//   fail            exit nonzero after consuming input
#include <cstdlib>
#include <iostream>
#include <string>

#include "pnpmri/denoisers.hpp"
#include "pnpmri/tensor_io.hpp"

using namespace pnpmri;

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "identity";
  ComplexTensor t = tensor_read(std::cin, /*expect_eof=*/false);

  if (mode == "identity") {
    tensor_write(t, std::cout);
    return 0;
  }
  if (mode == "soft") {
    const double tau = argc > 2 ? std::atof(argv[2]) : 0.0;
    tensor_write(soft_thresh(t, tau), std::cout);
    return 0;
  }
  if (mode == "soft-eta") {
    const char* env = std::getenv("DENOISER_ETA");
    const double tau = env ? std::atof(env) : 0.0;
    tensor_write(soft_thresh(t, tau), std::cout);
    return 0;
  }
  if (mode == "wrongshape") {
    ComplexTensor other({t.size() + 1});
    tensor_write(other, std::cout);
    return 0;
  }
  if (mode == "garbage") {
    std::cout << "this is not a tensor\n";
    return 0;
  }
  if (mode == "fail") return 3;
  return 2;
}
