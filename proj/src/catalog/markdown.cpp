#include "bbohub/catalog/markdown.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

namespace bbohub::catalog {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::size_t leading_spaces(std::string_view s) {
  std::size_t n = 0;
  while (n < s.size() && s[n] == ' ') ++n;
  return n;
}

// Drops <script>, <style> and <iframe> elements including their content.
// An unclosed element swallows the rest of the segment.
std::string drop_dangerous_elements(std::string_view in) {
  static constexpr std::string_view kTags[] = {"script", "style", "iframe"};
  const std::string low = lower(in);
  std::string out;
  std::size_t pos = 0;
  while (pos < in.size()) {
    std::size_t best = std::string::npos;
    std::string_view tag;
    for (auto t : kTags) {
      std::size_t at = pos;
      while ((at = low.find("<" + std::string(t), at)) != std::string::npos) {
        const std::size_t after = at + 1 + t.size();
        if (after >= low.size() || !std::isalnum(static_cast<unsigned char>(low[after]))) break;
        at = after;
      }
      if (at < best) {
        best = at;
        tag = t;
      }
    }
    if (best == std::string::npos) {
      out.append(in.substr(pos));
      break;
    }
    out.append(in.substr(pos, best - pos));
    const std::size_t open_end = low.find('>', best);
    if (open_end == std::string::npos) break;
    if (low[open_end - 1] == '/') {
      pos = open_end + 1;
      continue;
    }
    const std::string close = "</" + std::string(tag);
    const std::size_t close_at = low.find(close, open_end);
    if (close_at == std::string::npos) break;
    const std::size_t close_end = low.find('>', close_at);
    pos = close_end == std::string::npos ? in.size() : close_end + 1;
  }
  return out;
}

bool is_fence(std::string_view line, char &ch, std::size_t &len) {
  const auto indent = leading_spaces(line);
  if (indent > 3) return false;
  line.remove_prefix(indent);
  if (line.size() < 3 || (line[0] != '`' && line[0] != '~')) return false;
  std::size_t n = 0;
  while (n < line.size() && line[n] == line[0]) ++n;
  if (n < 3) return false;
  ch = line[0];
  len = n;
  return true;
}

bool is_rule(std::string_view line) {
  line = trim(line);
  if (line.size() < 3) return false;
  const char c = line[0];
  if (c != '-' && c != '*' && c != '_') return false;
  std::size_t count = 0;
  for (char x : line) {
    if (x == c) {
      ++count;
    } else if (x != ' ') {
      return false;
    }
  }
  return count >= 3;
}

bool all_of_char(std::string_view line, char c) {
  line = trim(line);
  return !line.empty() && std::all_of(line.begin(), line.end(), [c](char x) { return x == c; });
}

int atx_level(std::string_view line, std::string_view &content) {
  const auto indent = leading_spaces(line);
  if (indent > 3) return 0;
  line.remove_prefix(indent);
  int level = 0;
  while (level < static_cast<int>(line.size()) && line[level] == '#') ++level;
  if (level == 0 || level > 6) return 0;
  if (static_cast<std::size_t>(level) < line.size() && line[level] != ' ' && line[level] != '\t') return 0;
  std::string_view rest = trim(line.substr(level));
  while (!rest.empty() && rest.back() == '#') rest.remove_suffix(1);
  content = trim(rest);
  return level;
}

// Returns marker width (including trailing space) or 0; sets ordered.
std::size_t list_marker(std::string_view line, bool &ordered) {
  const auto indent = leading_spaces(line);
  if (indent > 3) return 0;
  std::string_view s = line.substr(indent);
  if (s.size() >= 2 && (s[0] == '-' || s[0] == '*' || s[0] == '+') && s[1] == ' ') {
    ordered = false;
    return indent + 2;
  }
  std::size_t d = 0;
  while (d < s.size() && d < 9 && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
  if (d > 0 && d + 1 < s.size() && (s[d] == '.' || s[d] == ')') && s[d + 1] == ' ') {
    ordered = true;
    return indent + d + 2;
  }
  return 0;
}

class Renderer {
 public:
  RenderedReadme result;

  void blocks(const std::vector<std::string> &lines);

 private:
  std::string inline_html(std::string_view s);
  std::string inline_text(std::string_view s);
  void inline_impl(std::string_view s, std::string &html, std::string &text);

  void paragraph(std::vector<std::string> &para) {
    if (para.empty()) return;
    std::string joined;
    for (std::size_t i = 0; i < para.size(); ++i) {
      if (i) joined += '\n';
      joined += trim(para[i]);
    }
    result.html += "<p>" + inline_html(joined) + "</p>\n";
    result.text += inline_text(joined) + "\n";
    para.clear();
  }

  void heading(int level, std::string_view content) {
    const auto plain = std::string(trim(inline_text(content)));
    if (level == 1 && !result.title && !plain.empty()) result.title = plain;
    const auto n = std::to_string(level);
    result.html += "<h" + n + ">" + inline_html(content) + "</h" + n + ">\n";
    result.text += plain + "\n";
  }
};

void Renderer::blocks(const std::vector<std::string> &lines) {
  std::vector<std::string> para;
  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string_view line = lines[i];
    char fence_ch = 0;
    std::size_t fence_len = 0;
    std::string_view content;

    if (trim(line).empty()) {
      paragraph(para);
      ++i;
      continue;
    }
    if (is_fence(line, fence_ch, fence_len)) {
      paragraph(para);
      const auto indent = leading_spaces(line);
      const std::string info(trim(line.substr(indent + fence_len)));
      std::string code;
      ++i;
      while (i < lines.size()) {
        char c2 = 0;
        std::size_t l2 = 0;
        if (is_fence(lines[i], c2, l2) && c2 == fence_ch && l2 >= fence_len && trim(lines[i]).size() == l2) {
          ++i;
          break;
        }
        code += lines[i] + "\n";
        ++i;
      }
      if (!result.first_code_block) result.first_code_block = code;
      const auto lang = info.substr(0, info.find(' '));
      result.html += "<pre><code";
      if (!lang.empty()) result.html += " class=\"language-" + html_escape(lang) + "\"";
      result.html += ">" + html_escape(code) + "</code></pre>\n";
      result.text += code;
      continue;
    }
    if (const int level = atx_level(line, content); level > 0) {
      paragraph(para);
      heading(level, content);
      ++i;
      continue;
    }
    if (!para.empty() && (all_of_char(line, '=') || all_of_char(line, '-'))) {
      std::string joined;
      for (const auto &p : para) joined += std::string(trim(p)) + " ";
      para.clear();
      heading(all_of_char(line, '=') ? 1 : 2, trim(joined));
      ++i;
      continue;
    }
    if (is_rule(line)) {
      paragraph(para);
      result.html += "<hr>\n";
      ++i;
      continue;
    }
    if (trim(line).starts_with('>')) {
      paragraph(para);
      std::vector<std::string> inner;
      while (i < lines.size() && trim(lines[i]).starts_with('>')) {
        std::string_view s = trim(lines[i]).substr(1);
        if (!s.empty() && s[0] == ' ') s.remove_prefix(1);
        inner.emplace_back(s);
        ++i;
      }
      Renderer sub;
      sub.result.first_image = result.first_image;
      sub.result.first_code_block = result.first_code_block;
      sub.blocks(inner);
      result.html += "<blockquote>\n" + sub.result.html + "</blockquote>\n";
      result.text += sub.result.text;
      result.first_image = sub.result.first_image;
      result.first_code_block = sub.result.first_code_block;
      continue;
    }
    bool ordered = false;
    if (list_marker(line, ordered) > 0) {
      paragraph(para);
      const bool list_ordered = ordered;
      result.html += list_ordered ? "<ol>\n" : "<ul>\n";
      while (i < lines.size()) {
        bool o = false;
        const auto width = list_marker(lines[i], o);
        if (width == 0 || o != list_ordered) break;
        std::string item(trim(std::string_view(lines[i]).substr(width)));
        ++i;
        // Lazy continuation: indented or plain text lines until a blank line
        // or the next marker.
        while (i < lines.size() && !trim(lines[i]).empty()) {
          bool o2 = false;
          if (list_marker(lines[i], o2) > 0) break;
          char c2 = 0;
          std::size_t l2 = 0;
          std::string_view dummy;
          if (is_fence(lines[i], c2, l2) || atx_level(lines[i], dummy) > 0) break;
          item += "\n" + std::string(trim(lines[i]));
          ++i;
        }
        result.html += "<li>" + inline_html(item) + "</li>\n";
        result.text += inline_text(item) + "\n";
        // A single blank line between items keeps the list going.
        if (i + 1 < lines.size() && trim(lines[i]).empty()) {
          bool o3 = false;
          if (list_marker(lines[i + 1], o3) > 0 && o3 == list_ordered) ++i;
        }
      }
      result.html += list_ordered ? "</ol>\n" : "</ul>\n";
      continue;
    }
    para.emplace_back(line);
    ++i;
  }
  paragraph(para);
}

std::string Renderer::inline_html(std::string_view s) {
  std::string html, text;
  inline_impl(s, html, text);
  return html;
}

std::string Renderer::inline_text(std::string_view s) {
  std::string html, text;
  inline_impl(s, html, text);
  return text;
}

// Produces both renderings at once so images and links are discovered in a
// single scan.
void Renderer::inline_impl(std::string_view s, std::string &html, std::string &text) {
  // [label](url) starting at i (pointing at '['); fills label/url/end.
  auto parse_link = [&](std::size_t i, std::string_view &label, std::string_view &url, std::size_t &end) {
    int depth = 0;
    std::size_t j = i;
    for (; j < s.size(); ++j) {
      if (s[j] == '\\') {
        ++j;
        continue;
      }
      if (s[j] == '[') ++depth;
      if (s[j] == ']' && --depth == 0) break;
    }
    if (j >= s.size() || j + 1 >= s.size() || s[j + 1] != '(') return false;
    const std::size_t close = s.find(')', j + 2);
    if (close == std::string_view::npos) return false;
    label = s.substr(i + 1, j - i - 1);
    url = trim(s.substr(j + 2, close - j - 2));
    if (const auto sp = url.find(' '); sp != std::string_view::npos) url = url.substr(0, sp);  // drop title
    if (url.size() >= 2 && url.front() == '<' && url.back() == '>') url = url.substr(1, url.size() - 2);
    end = close + 1;
    return true;
  };

  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size() && std::ispunct(static_cast<unsigned char>(s[i + 1]))) {
      html += html_escape(s.substr(i + 1, 1));
      text += s[i + 1];
      i += 2;
      continue;
    }
    if (c == '`') {
      std::size_t run = 0;
      while (i + run < s.size() && s[i + run] == '`') ++run;
      const std::string ticks(run, '`');
      const auto close = s.find(ticks, i + run);
      if (close != std::string_view::npos) {
        const auto code = trim(s.substr(i + run, close - i - run));
        html += "<code>" + html_escape(code) + "</code>";
        text += code;
        i = close + run;
        continue;
      }
      html += ticks;
      text += ticks;
      i += run;
      continue;
    }
    std::string_view label, url;
    std::size_t end = 0;
    if (c == '!' && i + 1 < s.size() && s[i + 1] == '[' && parse_link(i + 1, label, url, end)) {
      const auto safe = safe_url(url);
      if (!result.first_image && safe != "#" && !url.empty()) result.first_image = std::string(url);
      std::string alt_html, alt_text;
      inline_impl(label, alt_html, alt_text);
      html += "<img src=\"" + html_escape(safe) + "\" alt=\"" + html_escape(alt_text) + "\">";
      text += alt_text;
      i = end;
      continue;
    }
    if (c == '[' && parse_link(i, label, url, end)) {
      std::string inner_html, inner_text;
      inline_impl(label, inner_html, inner_text);
      html += "<a href=\"" + html_escape(safe_url(url)) + "\">" + inner_html + "</a>";
      text += inner_text;
      i = end;
      continue;
    }
    if ((c == '*' || c == '_') && i + 1 < s.size() && s[i + 1] == c) {
      const std::string marker(2, c);
      const auto close = s.find(marker, i + 2);
      if (close != std::string_view::npos && close > i + 2) {
        std::string inner_html, inner_text;
        inline_impl(s.substr(i + 2, close - i - 2), inner_html, inner_text);
        html += "<strong>" + inner_html + "</strong>";
        text += inner_text;
        i = close + 2;
        continue;
      }
    }
    if ((c == '*' || c == '_') && i + 1 < s.size() && !std::isspace(static_cast<unsigned char>(s[i + 1]))) {
      // '_' inside a word (snake_case) is literal.
      const bool intraword = c == '_' && i > 0 && std::isalnum(static_cast<unsigned char>(s[i - 1]));
      const auto close = s.find(c, i + 1);
      const bool close_ok = close != std::string_view::npos &&
                            !(c == '_' && close + 1 < s.size() && std::isalnum(static_cast<unsigned char>(s[close + 1])));
      if (!intraword && close_ok) {
        std::string inner_html, inner_text;
        inline_impl(s.substr(i + 1, close - i - 1), inner_html, inner_text);
        html += "<em>" + inner_html + "</em>";
        text += inner_text;
        i = close + 1;
        continue;
      }
    }
    if (c == '<') {
      // Raw HTML is shown, never interpreted; the plain text skips the tag.
      const auto close = s.find('>', i);
      const bool looks_like_tag = close != std::string_view::npos && i + 1 < s.size() &&
                                  (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/' || s[i + 1] == '!');
      if (looks_like_tag) {
        html += html_escape(s.substr(i, close - i + 1));
        text += ' ';
        i = close + 1;
        continue;
      }
    }
    html += html_escape(s.substr(i, 1));
    text += c;
    ++i;
  }
}

}  // namespace

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string safe_url(std::string_view url) {
  // Browsers ignore whitespace and control characters inside the scheme.
  std::string squashed;
  for (char c : url) {
    if (static_cast<unsigned char>(c) > 0x20) squashed += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  for (std::string_view scheme : {"javascript:", "vbscript:", "data:"}) {
    if (squashed.starts_with(scheme)) return "#";
  }
  return std::string(url);
}

RenderedReadme render_readme(std::string_view markdown) {
  std::vector<std::string> raw;
  {
    std::string normalized(markdown);
    normalized.erase(std::remove(normalized.begin(), normalized.end(), '\r'), normalized.end());
    std::istringstream in(normalized);
    for (std::string line; std::getline(in, line);) {
      std::replace(line.begin(), line.end(), '\t', ' ');
      raw.push_back(std::move(line));
    }
  }

  // Strip dangerous elements from everything outside fenced code; inside a
  // fence the text is escaped anyway and kept verbatim.
  std::vector<std::string> lines;
  std::string segment;
  auto flush = [&] {
    if (segment.empty()) return;
    std::istringstream in(drop_dangerous_elements(segment));
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    segment.clear();
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char ch = 0;
    std::size_t len = 0;
    if (!is_fence(raw[i], ch, len)) {
      segment += raw[i] + "\n";
      continue;
    }
    flush();
    lines.push_back(raw[i]);
    for (++i; i < raw.size(); ++i) {
      lines.push_back(raw[i]);
      char c2 = 0;
      std::size_t l2 = 0;
      if (is_fence(raw[i], c2, l2) && c2 == ch && l2 >= len && trim(raw[i]).size() == l2) break;
    }
  }
  flush();

  Renderer r;
  r.blocks(lines);
  return std::move(r.result);
}

}  // namespace bbohub::catalog
