#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bbohub::catalog {

/// One pass over a README: sanitized HTML, plain text for indexing and the
/// pieces a package page pulls out.
struct RenderedReadme {
  std::optional<std::string> title;  // first level-1 heading, plain text
  std::string html;
  std::string text;
  std::optional<std::string> first_image;
  std::optional<std::string> first_code_block;
};

/// CommonMark subset: ATX/setext headings, fenced code, lists, block quotes,
/// rules, paragraphs, code spans, emphasis, links and images. script, style
/// and iframe elements are dropped with their content, any other raw HTML is
/// escaped, and javascript:/vbscript:/data: URLs become "#".
RenderedReadme render_readme(std::string_view markdown);

std::string html_escape(std::string_view s);
/// "#" for URLs with an executable scheme, else the URL unchanged.
std::string safe_url(std::string_view url);

}  // namespace bbohub::catalog
