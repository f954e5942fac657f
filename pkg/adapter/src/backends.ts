/**
 * Summarizer backends behind the wire protocol.
 *
 * echo and lead are model-free and deterministic, so pipelines and test
 * suites run fully offline. model wraps a pretrained encoder-decoder
 * summarization pipeline via the optional `@xenova/transformers` package;
 * when the package or its weights cannot be loaded the process must exit
 * nonzero before serving (enforced by the caller).
 */

import type { Summarizer, SummaryResult } from "./protocol.js";

export interface BackendConfig {
  maxInputTokens: number;
  k: number;
  modelId: string;
  device: string | undefined;
  beams: number;
  maxNewTokens: number;
  minNewTokens: number;
}

export const DEFAULTS: BackendConfig = {
  maxInputTokens: 4096,
  k: 128,
  modelId: "Xenova/distilbart-cnn-6-6",
  device: undefined,
  beams: 1,
  maxNewTokens: 256,
  minNewTokens: 8,
};

const tokenize = (text: string): string[] => text.split(/\s+/u).filter((t) => t.length > 0);

/** Whitespace-token window clamp used by the model-free backends. */
export function clampWindow(text: string, maxInputTokens: number): { text: string; truncated: boolean } {
  const tokens = tokenize(text);
  if (tokens.length <= maxInputTokens) {
    return { text, truncated: false };
  }
  return { text: tokens.slice(0, maxInputTokens).join(" "), truncated: true };
}

export function echoBackend(config: BackendConfig): Summarizer {
  return async (text: string): Promise<SummaryResult> => {
    const { text: window, truncated } = clampWindow(text, config.maxInputTokens);
    return { summary: window, truncated };
  };
}

export function leadBackend(config: BackendConfig): Summarizer {
  return async (text: string): Promise<SummaryResult> => {
    const { text: window, truncated } = clampWindow(text, config.maxInputTokens);
    return { summary: tokenize(window).slice(0, config.k).join(" "), truncated };
  };
}

// Non-literal specifier keeps the optional dependency out of compile-time
// resolution; install `@xenova/transformers` to enable model mode.
const MODEL_PACKAGE = "@xenova/transformers";

export async function modelBackend(config: BackendConfig): Promise<Summarizer> {
  let transformers: any;
  try {
    transformers = await import(MODEL_PACKAGE);
  } catch (err) {
    throw new Error(
      `model mode needs the optional '${MODEL_PACKAGE}' package (and downloadable weights): ${String(err)}`,
    );
  }
  const generator = await transformers.pipeline("summarization", config.modelId, {
    device: config.device,
  });
  return async (text: string): Promise<SummaryResult> => {
    const truncated = tokenize(text).length > config.maxInputTokens;
    const output = await generator(text, {
      truncation: true,
      num_beams: config.beams,
      max_new_tokens: config.maxNewTokens,
      min_new_tokens: config.minNewTokens,
    });
    const summary: unknown = output?.[0]?.summary_text;
    if (typeof summary !== "string" || summary.length === 0) {
      throw new Error("model returned no summary text");
    }
    return { summary, truncated };
  };
}
