// Spawns the real play service for the test run and tears it down after.
// Tests reach it at http://127.0.0.1:8923.

import { spawn, type ChildProcess } from "node:child_process";

export const BASE_URL = "http://127.0.0.1:8923";

let server: ChildProcess | undefined;

export async function setup(): Promise<void> {
  server = spawn("affine-ttt", ["serve", "--port", "8923"], {
    stdio: "ignore",
    detached: false,
  });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const resp = await fetch(`${BASE_URL}/api/specs`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error("play service did not come up on port 8923");
    }
    await new Promise((r) => setTimeout(r, 300));
  }
}

export async function teardown(): Promise<void> {
  server?.kill();
}
