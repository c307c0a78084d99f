import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    environmentOptions: {
      happyDOM: {
        // the round-trip test talks to the spawned service same-origin,
        // as in production where the page is served next to the API
        url: "http://127.0.0.1:8808",
      },
    },
    globalSetup: "./tests/globalSetup.ts",
    testTimeout: 180_000,
    hookTimeout: 60_000,
  },
});
