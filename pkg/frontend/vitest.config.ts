import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    globalSetup: "tests/server.setup.ts",
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
