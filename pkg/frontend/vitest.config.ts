import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    // each test file builds a corpus and spawns a server process
    fileParallelism: false,
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
});
