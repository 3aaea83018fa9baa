#include "tlopt/network_xml.hpp"

#include <expat.h>

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "tlopt/format.hpp"

namespace tlopt::net {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::MalformedXml: return "MalformedXml";
    case ParseErrorKind::UnknownElement: return "UnknownElement";
    case ParseErrorKind::UnknownReference: return "UnknownReference";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::MissingLane: return "MissingLane";
    case ParseErrorKind::InvalidAttribute: return "InvalidAttribute";
    case ParseErrorKind::InvalidStructure: return "InvalidStructure";
  }
  return "?";
}

namespace {

std::string describe(ParseErrorKind kind, long line, const std::string& element, const std::string& detail) {
  std::string msg(to_string(kind));
  if (line > 0) msg += " at line " + std::to_string(line);
  if (!element.empty()) msg += " <" + element + ">";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

ParseError::ParseError(ParseErrorKind kind, long line, std::string element, const std::string& detail)
    : std::runtime_error(describe(kind, line, element, detail)),
      kind_(kind),
      line_(line),
      element_(std::move(element)) {}

namespace {

struct Failure {
  ParseErrorKind kind;
  long line;
  std::string element;
  std::string detail;
};

using Attributes = std::map<std::string, std::string, std::less<>>;

class Builder {
 public:
  explicit Builder(XML_Parser parser) : parser_(parser) {}

  static void XMLCALL on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<Builder*>(self)->start(name, attrs);
  }
  static void XMLCALL on_end(void* self, const XML_Char*) { --static_cast<Builder*>(self)->depth_; }
  static void XMLCALL on_text(void* self, const XML_Char* s, int len) { static_cast<Builder*>(self)->text(s, len); }
  static void XMLCALL on_doctype(void* self, const XML_Char*, const XML_Char*, const XML_Char*, int) {
    static_cast<Builder*>(self)->fail(ParseErrorKind::MalformedXml, "", "DOCTYPE declarations are not accepted");
  }

  std::optional<Failure> failure;
  NetworkData data;
  bool saw_root = false;
  // Source line of every entity, keyed by element name and id.
  std::map<std::pair<std::string, std::string>, long> lines;

 private:
  long line() const { return static_cast<long>(XML_GetCurrentLineNumber(parser_)); }

  void fail(ParseErrorKind kind, std::string element, std::string detail) {
    if (failure) return;
    failure = Failure{kind, line(), std::move(element), std::move(detail)};
    XML_StopParser(parser_, XML_FALSE);
  }

  void text(const XML_Char* s, int len) {
    if (failure) return;
    for (int i = 0; i < len; ++i) {
      char c = s[i];
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
        fail(ParseErrorKind::MalformedXml, "", "unexpected character data");
        return;
      }
    }
  }

  void start(const std::string& name, const XML_Char** raw) {
    ++depth_;
    if (failure) return;
    Attributes attrs;
    for (int i = 0; raw[i]; i += 2) attrs.emplace(raw[i], raw[i + 1]);

    if (depth_ == 1) {
      if (name != "network") return fail(ParseErrorKind::UnknownElement, name, "root element must be <network>");
      if (!attrs.empty()) return fail(ParseErrorKind::InvalidAttribute, name, "unexpected attribute " + attrs.begin()->first);
      saw_root = true;
      return;
    }
    if (depth_ > 2) return fail(ParseErrorKind::MalformedXml, name, "entities must be direct children of <network>");

    if (name == "junction") {
      if (!expect(name, attrs, {"id", "x", "y"}, {})) return;
      Junction j{attrs["id"], 0.0, 0.0};
      if (!number(name, attrs, "x", j.x) || !number(name, attrs, "y", j.y)) return;
      remember(name, j.id);
      data.junctions.push_back(std::move(j));
    } else if (name == "road") {
      if (!expect(name, attrs, {"id", "from", "to", "length"}, {"spawn_rate"})) return;
      Road r{attrs["id"], attrs["from"], attrs["to"], 0.0, 0.0};
      if (!number(name, attrs, "length", r.length)) return;
      if (attrs.count("spawn_rate") && !number(name, attrs, "spawn_rate", r.spawn_rate)) return;
      remember(name, r.id);
      data.roads.push_back(std::move(r));
    } else if (name == "lane") {
      if (!expect(name, attrs, {"id", "road"}, {})) return;
      remember(name, attrs["id"]);
      data.lanes.push_back({attrs["id"], attrs["road"]});
    } else if (name == "trajectory") {
      if (!expect(name, attrs, {"id", "junction", "in", "out", "length"}, {})) return;
      Trajectory t{attrs["id"], attrs["junction"], attrs["in"], attrs["out"], 0.0};
      if (!number(name, attrs, "length", t.crossing_length)) return;
      remember(name, t.id);
      data.trajectories.push_back(std::move(t));
    } else if (name == "conflict") {
      if (!expect(name, attrs, {"a", "b"}, {})) return;
      remember(name, attrs["a"]);
      data.conflicts.push_back({attrs["a"], attrs["b"]});
    } else if (name == "track") {
      if (!expect(name, attrs, {"id", "in", "trajectory", "out"}, {})) return;
      const std::string& id = attrs["id"];
      Track t{};
      auto [end, ec] = std::from_chars(id.data(), id.data() + id.size(), t.id);
      if (ec != std::errc() || end != id.data() + id.size()) {
        return fail(ParseErrorKind::InvalidAttribute, name, "track id must be an integer, got '" + id + "'");
      }
      t.in_lane = attrs["in"];
      t.trajectory = attrs["trajectory"];
      t.out_lane = attrs["out"];
      remember(name, id);
      data.tracks.push_back(std::move(t));
    } else {
      fail(ParseErrorKind::UnknownElement, name, "unknown element");
    }
  }

  bool expect(const std::string& element, const Attributes& attrs, std::initializer_list<const char*> required,
              std::initializer_list<const char*> optional) {
    std::set<std::string, std::less<>> known;
    for (const char* r : required) {
      known.insert(r);
      if (!attrs.count(r)) {
        fail(ParseErrorKind::InvalidAttribute, element, std::string("missing attribute ") + r);
        return false;
      }
    }
    for (const char* o : optional) known.insert(o);
    for (const auto& [key, value] : attrs) {
      if (!known.count(key)) {
        fail(ParseErrorKind::InvalidAttribute, element, "unexpected attribute " + key);
        return false;
      }
    }
    return true;
  }

  bool number(const std::string& element, const Attributes& attrs, const char* key, double& out) {
    const std::string& text = attrs.find(key)->second;
    auto parsed = detail::parse_double(text);
    if (!parsed || !std::isfinite(*parsed)) {
      fail(ParseErrorKind::InvalidAttribute, element, std::string(key) + " is not a finite number: '" + text + "'");
      return false;
    }
    out = *parsed;
    return true;
  }

  void remember(const std::string& element, const std::string& id) { lines.try_emplace({element, id}, line()); }

  XML_Parser parser_;
  int depth_ = 0;
};

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

ParseErrorKind kind_for(Rule rule) {
  switch (rule) {
    case Rule::DuplicateId: return ParseErrorKind::DuplicateId;
    case Rule::UnknownReference: return ParseErrorKind::UnknownReference;
    case Rule::MissingLane: return ParseErrorKind::MissingLane;
    case Rule::InvalidAttribute:
    case Rule::ReservedId: return ParseErrorKind::InvalidAttribute;
    default: return ParseErrorKind::InvalidStructure;
  }
}

struct Parsed {
  RoadNetwork net;
  std::map<std::pair<std::string, std::string>, long> lines;
};

Parsed parse_document(std::string_view document) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
  if (!parser) throw std::bad_alloc();
  Builder builder(parser.get());
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
  XML_SetStartDoctypeDeclHandler(parser.get(), &Builder::on_doctype);

  // Expat takes an int length; feed large documents in chunks.
  constexpr std::size_t kChunk = 1 << 20;
  XML_Status status = XML_STATUS_OK;
  std::size_t offset = 0;
  do {
    const std::size_t n = std::min(kChunk, document.size() - offset);
    const bool last = offset + n == document.size();
    status = XML_Parse(parser.get(), document.data() + offset, static_cast<int>(n), last ? XML_TRUE : XML_FALSE);
    offset += n;
  } while (status == XML_STATUS_OK && offset < document.size());

  if (builder.failure) {
    const Failure& f = *builder.failure;
    throw ParseError(f.kind, f.line, f.element, f.detail);
  }
  if (status != XML_STATUS_OK) {
    throw ParseError(ParseErrorKind::MalformedXml, static_cast<long>(XML_GetCurrentLineNumber(parser.get())), "",
                     XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (!builder.saw_root) throw ParseError(ParseErrorKind::MalformedXml, 0, "", "missing <network> root");

  return {RoadNetwork(std::move(builder.data)), std::move(builder.lines)};
}

}  // namespace

RoadNetwork parse_network_unchecked(std::string_view document) { return parse_document(document).net; }

RoadNetwork parse_network(std::string_view document) {
  auto [net, lines] = parse_document(document);
  auto violations = validate_network(net);
  if (!violations.empty()) {
    const Violation& v = violations.front();
    long line = 0;
    std::string element = "network";
    if (!v.ids.empty()) {
      for (const char* kind : {"junction", "road", "lane", "trajectory", "track", "conflict"}) {
        if (auto it = lines.find({kind, v.ids.front()}); it != lines.end()) {
          line = it->second;
          element = kind;
          break;
        }
      }
    }
    std::string detail = v.message;
    for (const auto& id : v.ids) detail += " [" + id + "]";
    throw ParseError(kind_for(v.rule), line, element, detail);
  }
  return net;
}

namespace {

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\t': out += "&#9;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
}

class ElementWriter {
 public:
  ElementWriter(std::string& out, const char* name) : out_(out) { out_.append("  <").append(name); }
  ~ElementWriter() { out_ += "/>\n"; }
  ElementWriter(const ElementWriter&) = delete;
  ElementWriter& operator=(const ElementWriter&) = delete;

  ElementWriter& attr(const char* key, std::string_view value) {
    out_.append(" ").append(key).append("=\"");
    append_escaped(out_, value);
    out_ += '"';
    return *this;
  }
  ElementWriter& attr(const char* key, double value) { return attr(key, detail::format_double(value)); }

 private:
  std::string& out_;
};

}  // namespace

std::string serialize_network(const RoadNetwork& net) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<network>\n";
  for (const auto& j : net.junctions()) ElementWriter(out, "junction").attr("id", j.id).attr("x", j.x).attr("y", j.y);
  for (const auto& r : net.roads()) {
    ElementWriter w(out, "road");
    w.attr("id", r.id).attr("from", r.from).attr("to", r.to).attr("length", r.length);
    if (r.spawn_rate != 0.0) w.attr("spawn_rate", r.spawn_rate);
  }
  for (const auto& l : net.lanes()) ElementWriter(out, "lane").attr("id", l.id).attr("road", l.road);
  for (const auto& t : net.trajectories()) {
    ElementWriter(out, "trajectory")
        .attr("id", t.id)
        .attr("junction", t.junction)
        .attr("in", t.in_lane)
        .attr("out", t.out_lane)
        .attr("length", t.crossing_length);
  }
  for (const auto& c : net.conflicts()) ElementWriter(out, "conflict").attr("a", c.a).attr("b", c.b);
  for (const auto& t : net.tracks()) {
    ElementWriter(out, "track")
        .attr("id", std::to_string(t.id))
        .attr("in", t.in_lane)
        .attr("trajectory", t.trajectory)
        .attr("out", t.out_lane);
  }
  out += "</network>\n";
  return out;
}

}  // namespace tlopt::net
