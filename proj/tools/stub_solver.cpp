// Misbehaving solver for harness tests: prints some protocol lines, then
// burns CPU (or sleeps) until it is killed.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>

int main(int argc, char** argv) {
  bool sleep_mode = false;
  double seconds = -1;  // < 0: forever
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--sleep") {
      sleep_mode = true;
    } else if (a == "--ignore-term") {
      std::signal(SIGTERM, SIG_IGN);
    } else if (a == "--for" && i + 1 < argc) {
      seconds = std::atof(argv[++i]);
    } else if (a == "--print" && i + 1 < argc) {
      // '|' separates lines
      std::string text = argv[++i];
      std::size_t pos = 0;
      while (pos <= text.size()) {
        std::size_t bar = text.find('|', pos);
        if (bar == std::string::npos) bar = text.size();
        std::printf("%s\n", text.substr(pos, bar - pos).c_str());
        pos = bar + 1;
      }
      std::fflush(stdout);
    } else {
      std::fprintf(stderr, "usage: stub_solver [--print 'o 10|o 8'] [--sleep] [--for S] [--ignore-term]\n");
      return 2;
    }
  }
  const auto start = std::chrono::steady_clock::now();
  auto done = [&] {
    return seconds >= 0 &&
           std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= seconds;
  };
  volatile unsigned long long sink = 0;
  while (!done()) {
    if (sleep_mode) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    } else {
      for (int i = 0; i < 1'000'000; ++i) sink = sink + static_cast<unsigned long long>(i) * 2654435761ULL;
    }
  }
  return 0;
}
