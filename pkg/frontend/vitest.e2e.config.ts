import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globals: true,
    include: ["tests/e2e.test.ts"],
    testTimeout: 120000,
    hookTimeout: 120000,
  },
});
