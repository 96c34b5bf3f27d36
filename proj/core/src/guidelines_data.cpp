// Embedded guideline texts, version 1. Do not edit casually: rendered
// prompts are golden-tested byte-for-byte against these strings.

#include "guidelines_data.hpp"

namespace vdesc::detail {

const char* const kGuidelineTexts[] = {
    "Avoid over-describing — Do not include non-essential visual details.",
    "Description should not be opinionated unless content demands it.",
    "Choose level of detail based on plot relevance when describing scenes.",
    "Description should be informative and conversational, in present tense and third-person omniscient.",
    "The vocabulary should reflect the predominant language/accent of the program and should be consistent with the genre and tone of the content while also mindful of the target audience. Vocabulary used should ensure accuracy, clarity, and conciseness.",
    "Consider historical context and avoid words with negative connotations or bias.",
    "Pay attention to verbs — Choose vivid verbs over bland ones with adverbs.",
    "Use pronouns only when clear whom they refer to.",
    "Use comparisons for shapes and sizes with familiar and globally relevant objects.",
    "Maintain consistency in word choice, character qualities, and visual elements for all audio descriptions.",
    "Tone and vocabulary should match the target audience's age range.",
    "Ensure no errors in word selection, pronunciation, diction, or enunciation.",
    "Start with general context, then add details.",
    "Describe shape, size, texture, or color as appropriate to the content.",
    "Use first-person narrative for engagement if required to engage the audience.",
    "Use articles appropriately to introduce or refer to subjects.",
    "Prefer formal speech over colloquialisms, except where appropriate.",
    "When introducing new terms, objects, or actions, label them first, and then follow with the definitions.",
    "Describe objectively without personal interpretation or comment. Also, do not censor content.",
    "Deliver narration steadily and impersonally (but not monotonously), matching the program's tone.",
    "It can be important to add emotion, excitement, lightness of touch at different points. Adjust style for emotion and mood according to the program's genre.",
    "If it is children’s content, tailor language and pace for children's TV, considering audience feedback.",
    "Do not alter, filter, or exclude content. You should describe what you see. Try to seek simplicity and succinctness in your description.",
    "Prioritize what is relevant when describing action as to not affect user experience.",
    "Include location, time, and weather conditions when relevant to the scene or plot.",
    "Focus on key content for learning and enjoyment when creating audio descriptions. This is so that the intention of the program is conveyed.",
    "When describing an instructional video/content, describe the sequence of activities first.",
    "For a dramatic production, include elements such as style, setting, focus, period, dress, facial features, objects, and aesthetics.",
    "Describe what is most essential for the viewer to know in order to follow, understand, and appreciate the intended learning outcomes of the video/content.",
    "The description should describe characters, locations, on-screen action, and on-screen information.",
    "Describe only what a sighted viewer can see.",
    "Describe main and key supporting characters' visual aspects relevant to identity and personality. Prioritize factual descriptions of traits like hair, skin, eyes, build, height, age, and visible disabilities. Ensure consistency and avoid singling out characters for specific traits. Use person-first language.",
    "If unable to confirm or if not established in the plot, do not guess or assume racial, ethnic or gender identity.",
    "When naming characters for the first time, aim to include a descriptor before the name (e.g., \"a bearded man, Jack\").",
    "Description should convey facial expressions, body language and reactions.",
    "When important to the meaning / intent of content, describe race using currently-accepted terminology.",
    "Avoid identifying characters solely by gender expression unless it offers unique insights not apparent otherwise to low vision viewers.",
    "Describe character clothing if it enhances characterization, plot, setting, or genre enjoyment.",
    "If text on the screen is central to understanding, establish a pattern of on-screen words being read. This may include making an announcement, such as \"Words appear\".",
    "In the case of subtitles, the describer should read the translation after stating that a subtitle appears.",
    "When shot changes are critical to the understanding of the scene, indicate them by describing where the action is or where characters are present in the new shot.",
    "Provide description before the content rather than after.",
};

const int kGuidelineCount = 42;

}  // namespace vdesc::detail
