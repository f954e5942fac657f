#!/usr/bin/env node
/**
 * Summarizer adapter entry point.
 *
 * Exactly one mode must be selected:
 *   --echo         identity summarizer (deterministic, model-free)
 *   --lead         first --k tokens of the input window (model-free)
 *   --model [id]   pretrained summarization model via @xenova/transformers
 *
 * Backend/load failures exit nonzero before any request is read; per-request
 * failures are error responses and the process keeps serving.
 */

import { parseArgs } from "node:util";

import { DEFAULTS, echoBackend, leadBackend, modelBackend, type BackendConfig } from "./backends.js";
import { serve, type Summarizer } from "./protocol.js";

const USAGE = `usage: spin-adapter (--echo | --lead | --model [id]) [options]

options:
  --k N                  lead mode: tokens to keep (default ${DEFAULTS.k})
  --max-input-tokens N   input window; longer inputs are truncated and the
                         response is flagged "truncated" (default ${DEFAULTS.maxInputTokens})
  --beams N              model mode: beam count (default ${DEFAULTS.beams})
  --max-new-tokens N     model mode: generation cap (default ${DEFAULTS.maxNewTokens})
  --min-new-tokens N     model mode: generation floor (default ${DEFAULTS.minNewTokens})
  --device NAME          model mode: device selector
`;

function positiveInt(value: string | undefined, fallback: number, name: string): number {
  if (value === undefined) {
    return fallback;
  }
  const parsed = Number(value);
  if (!Number.isInteger(parsed) || parsed < 1) {
    throw new Error(`${name} must be a positive integer, got '${value}'`);
  }
  return parsed;
}

async function pickBackend(argv: string[]): Promise<Summarizer> {
  const { values } = parseArgs({
    args: argv,
    options: {
      echo: { type: "boolean", default: false },
      lead: { type: "boolean", default: false },
      model: { type: "string" },
      k: { type: "string" },
      "max-input-tokens": { type: "string" },
      beams: { type: "string" },
      "max-new-tokens": { type: "string" },
      "min-new-tokens": { type: "string" },
      device: { type: "string" },
      help: { type: "boolean", default: false },
    },
  });
  if (values.help) {
    process.stdout.write(USAGE);
    process.exit(0);
  }
  const modes = [values.echo, values.lead, values.model !== undefined].filter(Boolean).length;
  if (modes !== 1) {
    throw new Error("select exactly one of --echo, --lead, --model");
  }
  const config: BackendConfig = {
    maxInputTokens: positiveInt(values["max-input-tokens"], DEFAULTS.maxInputTokens, "--max-input-tokens"),
    k: positiveInt(values.k, DEFAULTS.k, "--k"),
    modelId: values.model === "" || values.model === undefined ? DEFAULTS.modelId : values.model,
    device: values.device,
    beams: positiveInt(values.beams, DEFAULTS.beams, "--beams"),
    maxNewTokens: positiveInt(values["max-new-tokens"], DEFAULTS.maxNewTokens, "--max-new-tokens"),
    minNewTokens: positiveInt(values["min-new-tokens"], DEFAULTS.minNewTokens, "--min-new-tokens"),
  };
  if (values.echo) {
    return echoBackend(config);
  }
  if (values.lead) {
    return leadBackend(config);
  }
  return modelBackend(config);
}

async function main(): Promise<void> {
  let summarize: Summarizer;
  try {
    summarize = await pickBackend(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`spin-adapter: ${String(err instanceof Error ? err.message : err)}\n`);
    process.stderr.write(USAGE);
    process.exit(1);
  }
  await serve(summarize);
}

main().catch((err) => {
  process.stderr.write(`spin-adapter: fatal: ${String(err)}\n`);
  process.exit(1);
});
