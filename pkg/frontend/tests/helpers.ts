import { spawn, ChildProcess } from "node:child_process";
import { setBaseUrl } from "../src/api.js";

export interface LiveServer {
  baseUrl: string;
  stop: () => void;
}

/** Start the real session service on a free-ish port and wait until it
 * answers. Requires the python package to be installed (pip install -e .). */
export async function startServer(): Promise<LiveServer> {
  const port = 8700 + Math.floor(Math.random() * 1000);
  const baseUrl = `http://127.0.0.1:${port}`;
  const proc: ChildProcess = spawn(
    "python3",
    ["-m", "theraloop.cli", "serve", "--port", String(port)],
    { cwd: "..", stdio: ["ignore", "pipe", "pipe"] },
  );
  let stderr = "";
  proc.stderr?.on("data", (chunk) => (stderr += String(chunk)));

  const deadline = Date.now() + 30000;
  while (Date.now() < deadline) {
    if (proc.exitCode !== null) {
      throw new Error(`server exited early (code ${proc.exitCode}): ${stderr}`);
    }
    try {
      const res = await fetch(`${baseUrl}/api/activities`);
      if (res.ok) {
        setBaseUrl(baseUrl);
        return { baseUrl, stop: () => proc.kill("SIGTERM") };
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
  proc.kill("SIGTERM");
  throw new Error(`server did not come up on ${baseUrl}: ${stderr}`);
}

export function flush(): Promise<void> {
  // let queued store updates and microtasks settle
  return new Promise((resolve) => setTimeout(resolve, 0));
}
