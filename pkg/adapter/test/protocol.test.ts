import { spawn } from "node:child_process";
import { fileURLToPath } from "node:url";
import * as path from "node:path";

import { describe, expect, it } from "vitest";

const MAIN = path.join(path.dirname(fileURLToPath(import.meta.url)), "..", "dist", "main.js");

interface RunResult {
  code: number | null;
  stdout: string;
  stderr: string;
}

function runAdapter(flags: string[], inputLines: string[], timeoutMs = 30_000): Promise<RunResult> {
  return new Promise((resolve, reject) => {
    const child = spawn(process.execPath, [MAIN, ...flags], { stdio: ["pipe", "pipe", "pipe"] });
    let stdout = "";
    let stderr = "";
    const timer = setTimeout(() => {
      child.kill("SIGKILL");
      reject(new Error(`adapter timed out; stderr so far:\n${stderr}`));
    }, timeoutMs);
    child.stdout.on("data", (chunk) => (stdout += chunk));
    child.stderr.on("data", (chunk) => (stderr += chunk));
    child.on("error", reject);
    child.on("close", (code) => {
      clearTimeout(timer);
      resolve({ code, stdout, stderr });
    });
    child.stdin.write(inputLines.map((line) => line + "\n").join(""));
    child.stdin.end();
  });
}

const responses = (stdout: string): Array<Record<string, unknown>> =>
  stdout
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line) => JSON.parse(line));

// deterministic pseudo-random text so failures reproduce
function lcg(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state * 1664525 + 1013904223) >>> 0;
    return state / 2 ** 32;
  };
}

describe("echo mode protocol conformance", () => {
  it("answers 100 randomized requests in order with matching ids", async () => {
    const rand = lcg(42);
    const requests = Array.from({ length: 100 }, (_, i) => {
      const isEmpty = i === 37;
      const tokenCount = 1 + Math.floor(rand() * 40);
      const text = isEmpty
        ? ""
        : Array.from({ length: tokenCount }, () => `w${Math.floor(rand() * 500)}`).join(" ");
      return { id: `doc${i}#${i % 5}`, text, max_tokens: 4096 };
    });
    const { code, stdout } = await runAdapter(
      ["--echo"],
      requests.map((r) => JSON.stringify(r)),
    );
    expect(code).toBe(0);
    const answers = responses(stdout);
    expect(answers).toHaveLength(100);
    answers.forEach((answer, i) => {
      expect(answer.id).toBe(requests[i].id);
      if (requests[i].text === "") {
        expect(answer.error).toBeDefined();
        expect(answer.summary).toBeUndefined();
      } else {
        expect(answer.summary).toBe(requests[i].text);
        expect(answer.error).toBeUndefined();
      }
    });
  });

  it("flags truncation when the input exceeds the window", async () => {
    const { stdout } = await runAdapter(
      ["--echo", "--max-input-tokens", "4"],
      [JSON.stringify({ id: "t#0", text: "a b c d e f g", max_tokens: 4096 })],
    );
    const [answer] = responses(stdout);
    expect(answer).toEqual({ id: "t#0", summary: "a b c d", truncated: true });
  });

  it("keeps serving after a malformed request line", async () => {
    const { code, stdout } = await runAdapter(
      ["--echo"],
      ["this is not json", JSON.stringify({ id: "ok#1", text: "still alive", max_tokens: 16 })],
    );
    expect(code).toBe(0);
    const answers = responses(stdout);
    expect(answers).toHaveLength(2);
    expect(answers[0].id).toBeNull();
    expect(answers[0].error).toMatch(/malformed/);
    expect(answers[1]).toEqual({ id: "ok#1", summary: "still alive" });
  });

  it("reports an error for requests without a text string", async () => {
    const { stdout } = await runAdapter(
      ["--echo"],
      [JSON.stringify({ id: "x#0", max_tokens: 4 })],
    );
    const [answer] = responses(stdout);
    expect(answer.id).toBe("x#0");
    expect(answer.error).toMatch(/no text/);
  });
});

describe("lead mode", () => {
  it("returns the first k tokens", async () => {
    const { stdout } = await runAdapter(
      ["--lead", "--k", "3"],
      [JSON.stringify({ id: "l#0", text: "one two three four five", max_tokens: 64 })],
    );
    expect(responses(stdout)[0]).toEqual({ id: "l#0", summary: "one two three" });
  });

  it("is deterministic across runs", async () => {
    const request = JSON.stringify({ id: "l#1", text: "a b c d e", max_tokens: 64 });
    const first = await runAdapter(["--lead", "--k", "2"], [request]);
    const second = await runAdapter(["--lead", "--k", "2"], [request]);
    expect(first.stdout).toBe(second.stdout);
  });
});

describe("startup validation", () => {
  it("exits nonzero when no mode is selected", async () => {
    const { code, stdout, stderr } = await runAdapter([], [JSON.stringify({ id: "x", text: "y" })]);
    expect(code).not.toBe(0);
    expect(stdout.trim()).toBe("");
    expect(stderr).toMatch(/exactly one/);
  });

  it("exits nonzero when several modes are selected", async () => {
    const { code } = await runAdapter(["--echo", "--lead"], []);
    expect(code).not.toBe(0);
  });

  it("exits nonzero before serving when the model backend cannot load", async () => {
    // the optional model package is not installed in this environment
    const { code, stdout, stderr } = await runAdapter(
      ["--model", "some/model"],
      [JSON.stringify({ id: "m#0", text: "hello", max_tokens: 8 })],
    );
    expect(code).not.toBe(0);
    expect(stdout.trim()).toBe("");
    expect(stderr).toMatch(/@xenova\/transformers|model mode/);
  });

  it("rejects a non-integer window", async () => {
    const { code, stderr } = await runAdapter(["--echo", "--max-input-tokens", "zero"], []);
    expect(code).not.toBe(0);
    expect(stderr).toMatch(/positive integer/);
  });
});
