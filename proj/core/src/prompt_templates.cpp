// Embedded prompt templates, version 1. Rendered prompts are golden-tested
// byte-for-byte; edits here must update the golden files in tests/golden.

#include "prompt_texts.hpp"

#include <string>
#include <vector>

namespace vdesc::detail {

const char* const kTemplateNonCompliant =
    R"tmpl(Imagine your role is to generate descriptions for videos. You will watch a sequence of keyframes from a video and craft a description based on these keyframes.)tmpl";

const char* const kTemplateNonCompliantWithHA =
    R"tmpl(Imagine your role is to generate descriptions for videos. You will watch a sequence of keyframes from a video and read the current description of this video. Your task is to revise the description.

Current Description: {desc_current})tmpl";

const char* const kTemplateCompliantNoHA =
    R"tmpl(Imagine your role is to generate descriptions for videos to make them accessible to blind and low vision individuals. You will watch a sequence of keyframes from a video. Based on these keyframes, craft a description. You must follow all the given instructions. You should avoid any prefatory language, such as `the video shows'. Output your result as a dictionary format: {"Video_Category": A string representing the category of video you believe it to be, "Revised_Desc": A string of description.}

{instructions})tmpl";

const char* const kTemplateCompliant =
    R"tmpl(Imagine your role is to generate descriptions for videos to make them accessible to blind and low vision individuals. You will watch a sequence of keyframes from a video and read the current description of this video. Your task is to revise the current description. You must follow all the given instructions. Output your result in a dictionary format: {"Video_Category": A string representing the category of video you believe it to be, "Revised_Desc": A string of revised description.}

Current Description: {desc_current}

{instructions})tmpl";

const char* const kJudgeSystemText =
    R"tmpl(You are an expert evaluator with a deep understanding of video description quality, particularly for making content accessible to blind and low vision (BLV) individuals. Your role is to assess and rate video descriptions based on specific metrics.)tmpl";

const char* const kJudgeUserTemplate =
    R"tmpl(Task:

I have two video descriptions: one is the ground truth, and the other is generated by a model. Additionally, I have four evaluation metrics: Descriptive, Objective, Accurate, and Clear. Please evaluate the model-generated description using the above metrics. Provide a rating from 1 to 5 for each metric, and briefly explain the reasons for each rating.

Metrics Definition:

1. Descriptive: A descriptive description should provide vivid details about objects, people, and settings while maintaining a concise narrative flow. It should include essential information about the appearance of individuals, such as their clothing, facial expressions, and actions, and visual properties of objects, such as color and shape. For example, "A smiling woman, wearing a loose white dress, types on a laptop in a softly lit room."

2. Objective: An objective description should report what is visible without adding personal opinions or assumptions. For instance, describe two people as “a woman and a man” without adding any relationship context unless it is mentioned. It should also avoid guessing personal attributes like racial or gender identities unless explicitly clear.

3. Accurate: An accurate description should aim for precision in describing visible elements without imagination. It should ensure that all details, such as colors and spatial arrangements, are reported correctly. For instance, "Blue sky with white clouds" instead of "White sky with blue clouds" if that is what appears. Additionally, it should avoid adding unnecessary details that do not contribute to a deeper understanding of the scene.

4. Clear: A clear description should present information in the videos in a way that is easy to follow for blind and low vision individuals. It should describe the object or character’s properties before the actions or relationships with other objects or characters. For example, "A man wearing sunglasses plays the piano." Pronouns should only be used when it is clear who they refer to, and the description should include any on-screen text if it is central to understanding. For instance, "A man in a black polo shirt is speaking. He is in a studio setting with a red couch and a blue background featuring the text ’Talk of the Town’".

Input:

- Ground truth video description: {desc_gt}

- Model-generated video description: {desc_can}

Output Format:

Return the result as a string format dictionary with the following structure:

{"Descriptive": [Rating out of 5],

"Objective": [Rating out of 5],

"Accurate": [Rating out of 5],

"Clear": [Rating out of 5],

"Reason": "Your brief explanation here"})tmpl";

const char* const kCategoryTemplate =
    R"tmpl(Imagine your role is to classify videos for an accessibility dataset. You will read a video description and choose the single category that best fits the video. Choose exactly one category from the following list:

{categories}

Video description: {description}

Answer with the category name only, exactly as written in the list.)tmpl";

const std::vector<std::string>& taxonomy_names() {
    static const std::vector<std::string> kNames = {
        "Film and Animation",
        "Music",
        "Sports",
        "Entertainment",
        "News and Politics",
        "Pets and Animals",
        "How-to and Instructional",
        "Event",
        "Travel",
        "People and Vlogs",
        "Food and Cooking",
        "Health and Wellness",
        "Auto and Technology",
        "Nonprofits and Activism",
        "Education, Seminar and Talks",
    };
    return kNames;
}

}  // namespace vdesc::detail
