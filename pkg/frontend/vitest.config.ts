import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // every test shells out to the Python CLI at least once
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
