#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

int main(int argc, char** argv) {
  doctest::Context context;
  // Failures must report, not trap, when a tracer is attached.
  context.setOption("no-breaks", true);
  context.applyCommandLine(argc, argv);
  return context.run();
}
