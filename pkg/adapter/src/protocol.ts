/**
 * Line-delimited JSON wire protocol: one request object per stdin line, one
 * response object per stdout line, in request order.
 *
 *   request:  {"id": "<source_id>#<part_index>", "text": "...", "max_tokens": N}
 *   response: {"id": "<same id>", "summary": "...", "truncated"?: true}
 *             {"id": "<same id>", "error": "<message>"}
 *
 * Per-request failures become error responses; the loop never dies on a bad
 * line. A malformed request (unparseable JSON) is answered with id null.
 */

import * as readline from "node:readline";

export interface SummaryResult {
  summary: string;
  truncated: boolean;
}

export type Summarizer = (text: string) => Promise<SummaryResult>;

interface Response {
  id: string | null;
  summary?: string;
  truncated?: boolean;
  error?: string;
}

async function handleLine(line: string, summarize: Summarizer): Promise<Response> {
  let request: unknown;
  try {
    request = JSON.parse(line);
  } catch (err) {
    return { id: null, error: `malformed request line: ${String(err)}` };
  }
  if (typeof request !== "object" || request === null) {
    return { id: null, error: "request is not a JSON object" };
  }
  const record = request as Record<string, unknown>;
  const id = typeof record.id === "string" ? record.id : null;
  if (typeof record.text !== "string") {
    return { id, error: "request carries no text string" };
  }
  if (record.text.trim() === "") {
    return { id, error: "empty text" };
  }
  try {
    const { summary, truncated } = await summarize(record.text);
    const response: Response = { id, summary };
    if (truncated) {
      response.truncated = true;
    }
    return response;
  } catch (err) {
    return { id, error: String(err instanceof Error ? err.message : err) };
  }
}

export async function serve(
  summarize: Summarizer,
  input: NodeJS.ReadableStream = process.stdin,
  output: NodeJS.WritableStream = process.stdout,
): Promise<void> {
  const lines = readline.createInterface({ input, crlfDelay: Infinity });
  for await (const line of lines) {
    if (line.trim() === "") {
      continue;
    }
    const response = await handleLine(line, summarize);
    const flushed = output.write(JSON.stringify(response) + "\n");
    if (!flushed) {
      await new Promise<void>((resolve) => output.once("drain", () => resolve()));
    }
  }
}
