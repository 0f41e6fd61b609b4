import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    globalSetup: "./tests/global-setup.ts",
    testTimeout: 120_000,
    hookTimeout: 120_000,
    // the integration test owns a single backend process
    fileParallelism: false,
  },
});
