#include "vdesc/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <jpeglib.h>
#include <png.h>

#include "vdesc/errors.hpp"

namespace vdesc {

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + path);
}

namespace {

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

}  // namespace

Frame decode_jpeg(const std::vector<std::uint8_t>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;

    Frame frame;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw InvalidArgument(std::string("decode_jpeg: ") + jerr.message);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    frame.width = static_cast<int>(cinfo.output_width);
    frame.height = static_cast<int>(cinfo.output_height);
    frame.rgb.resize(frame.pixel_count() * 3);
    std::size_t stride = static_cast<std::size_t>(frame.width) * 3;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = frame.rgb.data() + cinfo.output_scanline * stride;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return frame;
}

Frame decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw InvalidArgument(std::string("decode_png: ") + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    Frame frame;
    frame.width = static_cast<int>(image.width);
    frame.height = static_cast<int>(image.height);
    frame.rgb.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, frame.rgb.data(), 0, nullptr)) {
        png_image_free(&image);
        throw InvalidArgument(std::string("decode_png: ") + image.message);
    }
    return frame;
}

Frame decode_image(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
        bytes[3] == 'G') {
        return decode_png(bytes);
    }
    if (bytes.size() >= 2 && bytes[0] == 0xff && bytes[1] == 0xd8) {
        return decode_jpeg(bytes);
    }
    throw InvalidArgument("decode_image: not a PNG or JPEG");
}

Frame load_image_file(const std::string& path) {
    return decode_image(read_binary_file(path));
}

std::vector<std::uint8_t> encode_jpeg(const Frame& frame, int quality) {
    if (frame.width <= 0 || frame.height <= 0 ||
        frame.rgb.size() != frame.pixel_count() * 3) {
        throw InvalidArgument("encode_jpeg: malformed frame");
    }
    jpeg_compress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;

    unsigned char* out_buf = nullptr;
    unsigned long out_size = 0;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_compress(&cinfo);
        if (out_buf) free(out_buf);
        throw InvalidArgument(std::string("encode_jpeg: ") + jerr.message);
    }
    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &out_buf, &out_size);
    cinfo.image_width = static_cast<JDIMENSION>(frame.width);
    cinfo.image_height = static_cast<JDIMENSION>(frame.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    std::size_t stride = static_cast<std::size_t>(frame.width) * 3;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(frame.rgb.data() + cinfo.next_scanline * stride);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    std::vector<std::uint8_t> out(out_buf, out_buf + out_size);
    jpeg_destroy_compress(&cinfo);
    free(out_buf);
    return out;
}

std::vector<std::uint8_t> encode_png(const Frame& frame) {
    if (frame.width <= 0 || frame.height <= 0 ||
        frame.rgb.size() != frame.pixel_count() * 3) {
        throw InvalidArgument("encode_png: malformed frame");
    }
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(frame.width);
    image.height = static_cast<png_uint_32>(frame.height);
    image.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, frame.rgb.data(), 0,
                                   nullptr)) {
        throw IoError(std::string("encode_png: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, frame.rgb.data(), 0,
                                   nullptr)) {
        throw IoError(std::string("encode_png: ") + image.message);
    }
    out.resize(size);
    return out;
}

Frame resize_max_side(const Frame& frame, int max_side) {
    if (max_side < 1) throw InvalidArgument("resize_max_side: max_side must be >= 1");
    int longest = std::max(frame.width, frame.height);
    if (longest <= max_side) return frame;

    double scale = static_cast<double>(max_side) / longest;
    int out_w = std::max(1, static_cast<int>(frame.width * scale + 0.5));
    int out_h = std::max(1, static_cast<int>(frame.height * scale + 0.5));
    if (frame.width >= frame.height) out_w = max_side;
    else out_h = max_side;

    Frame out;
    out.width = out_w;
    out.height = out_h;
    out.index = frame.index;
    out.timestamp_seconds = frame.timestamp_seconds;
    out.rgb.resize(static_cast<std::size_t>(out_w) * out_h * 3);

    double x_ratio = static_cast<double>(frame.width) / out_w;
    double y_ratio = static_cast<double>(frame.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        int y0 = static_cast<int>(oy * y_ratio);
        int y1 = std::min(frame.height, std::max(y0 + 1, static_cast<int>((oy + 1) * y_ratio)));
        for (int ox = 0; ox < out_w; ++ox) {
            int x0 = static_cast<int>(ox * x_ratio);
            int x1 = std::min(frame.width, std::max(x0 + 1, static_cast<int>((ox + 1) * x_ratio)));
            double acc[3] = {0.0, 0.0, 0.0};
            int count = 0;
            for (int y = y0; y < y1; ++y) {
                const std::uint8_t* row = frame.rgb.data() +
                                          (static_cast<std::size_t>(y) * frame.width + x0) * 3;
                for (int x = x0; x < x1; ++x) {
                    acc[0] += row[0];
                    acc[1] += row[1];
                    acc[2] += row[2];
                    row += 3;
                    ++count;
                }
            }
            std::uint8_t* dst = out.rgb.data() +
                                (static_cast<std::size_t>(oy) * out_w + ox) * 3;
            for (int c = 0; c < 3; ++c) {
                dst[c] = static_cast<std::uint8_t>(acc[c] / count + 0.5);
            }
        }
    }
    return out;
}

}  // namespace vdesc
